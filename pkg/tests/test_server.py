"""MCP server: direct dispatch, handlers, and a stdio round trip."""

import json
import sys
from pathlib import Path

import anyio
import pytest
from mcp import ClientSession
from mcp.client.stdio import StdioServerParameters, stdio_client

from bell_entropy.server import TOOLS, call_tool, dispatch, list_tools
from bell_entropy.states import density_to_json, maximally_mixed

ROOT = Path(__file__).parent.parent


def test_tool_names():
    assert [t.name for t in TOOLS] == [
        "analyze_state", "boundary_curve", "gibbs_curve", "thresholds", "run_verification",
    ]
    assert [t.name for t in anyio.run(list_tools)] == [t.name for t in TOOLS]


def test_dispatch_thresholds():
    result = dispatch("thresholds", {})
    assert result["linearEntropy"] == 0.5
    assert result["vnCondSum"] == pytest.approx(0.2797, abs=1e-4)


def test_dispatch_boundary_curve():
    result = dispatch("boundary_curve", {"region": "linear-cond", "points": 3})
    assert result["columns"] == ["beta", "bound"]
    assert [row[1] for row in result["rows"]] == [-1.0, 0.5, -1.0]


def test_dispatch_analyze_state():
    result = dispatch("analyze_state", {"state": density_to_json(maximally_mixed()), "restarts": 2})
    assert result["s12_linear"] == pytest.approx(0.75)
    assert result["beta_source"] == "maximized"


def test_dispatch_unknown_tool():
    with pytest.raises(ValueError, match="Unknown tool"):
        dispatch("calculator", {})


def test_call_tool_returns_json():
    content = anyio.run(call_tool, "gibbs_curve", {"xi1": 2.5, "points": 5, "lambda_max": 2.0})
    data = json.loads(content[0].text)
    assert len(data["rows"]) == 5


def test_call_tool_reports_errors_as_text():
    content = anyio.run(call_tool, "nonexistent", {})
    assert content[0].text.startswith("Error:")
    content = anyio.run(call_tool, "boundary_curve", {"region": "linear-total", "points": 1})
    assert content[0].text.startswith("Error:")


async def _round_trip():
    params = StdioServerParameters(command=sys.executable, args=["-m", "bell_entropy.server"], cwd=str(ROOT))
    async with stdio_client(params) as (read_stream, write_stream):
        async with ClientSession(read_stream, write_stream) as session:
            await session.initialize()
            tools = await session.list_tools()
            result = await session.call_tool("thresholds", {})
            return [t.name for t in tools.tools], json.loads(result.content[0].text)


def test_stdio_round_trip():
    names, data = anyio.run(_round_trip)
    assert "analyze_state" in names
    assert data["vnEntropy"] == pytest.approx(0.833, abs=1e-3)
