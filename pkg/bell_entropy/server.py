"""MCP stdio server exposing the analysis tools."""

import json
import sys

import anyio
from anyio import to_thread
from dotenv import load_dotenv
from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from bell_entropy.config import DEFAULT_RESTARTS, MEMBERSHIP_TOL, debug, log
from bell_entropy.regions import RegionId
from bell_entropy.tools import analyze_state, boundary_curve_table, gibbs_curve_table, run_verification, thresholds
from bell_entropy.verify import SUITES

MATRIX_SCHEMA = {
    "type": "object",
    "description": "State document: {\"matrix\": 4 rows of 4 [re, im] pairs}",
    "properties": {"matrix": {"type": "array"}},
    "required": ["matrix"],
}

SETTINGS_SCHEMA = {
    "type": "object",
    "description": "Unit Bloch vectors a1, b1 (qubit 1) and a2, b2 (qubit 2)",
    "properties": {key: {"type": "array", "items": {"type": "number"}} for key in ("a1", "b1", "a2", "b2")},
    "required": ["a1", "b1", "a2", "b2"],
}

TOOLS = [
    Tool(
        name="analyze_state",
        description="Entropies, CHSH beta (given or maximized), region verdicts and thresholds cleared for a two-qubit state",
        inputSchema={
            "type": "object",
            "properties": {
                "state": MATRIX_SCHEMA,
                "settings": SETTINGS_SCHEMA,
                "restarts": {"type": "integer", "description": "Maximization restarts", "default": DEFAULT_RESTARTS},
                "seed": {"type": "integer", "description": "Master seed", "default": 0},
            },
            "required": ["state"],
        },
    ),
    Tool(
        name="boundary_curve",
        description="Upper boundary of a compatibility region on a uniform beta grid",
        inputSchema={
            "type": "object",
            "properties": {
                "region": {"type": "string", "enum": [r.value for r in RegionId]},
                "points": {"type": "integer", "description": "Grid points (>= 2)", "default": 101},
            },
            "required": ["region"],
        },
    ),
    Tool(
        name="gibbs_curve",
        description="(lambda, beta, entropy) of the Gibbs family exp(lambda B)/Z for the operator with top eigenvalue xi1",
        inputSchema={
            "type": "object",
            "properties": {
                "xi1": {"type": "number", "description": "Top eigenvalue in [2, 2*sqrt(2)]"},
                "points": {"type": "integer", "default": 101},
                "lambda_max": {"type": "number", "default": 10.0},
            },
            "required": ["xi1"],
        },
    ),
    Tool(
        name="thresholds",
        description="Entropy thresholds above which no CHSH violation is possible",
        inputSchema={"type": "object", "properties": {}},
    ),
    Tool(
        name="run_verification",
        description="Run a verification suite and return its reports",
        inputSchema={
            "type": "object",
            "properties": {
                "suite": {"type": "string", "enum": [*SUITES, "all"]},
                "samples": {"type": "integer", "default": 100},
                "seed": {"type": "integer", "default": 0},
                "grid": {"type": "integer", "default": 10},
                "restarts": {"type": "integer", "description": "Maximization restarts", "default": DEFAULT_RESTARTS},
            },
            "required": ["suite"],
        },
    ),
]


app = Server("bell-entropy")


@app.list_tools()
async def list_tools() -> list[Tool]:
    return TOOLS


def dispatch(name: str, arguments: dict) -> dict:
    """Run one tool synchronously."""
    if name == "analyze_state":
        return analyze_state(
            state=arguments["state"],
            settings=arguments.get("settings"),
            restarts=arguments.get("restarts", DEFAULT_RESTARTS),
            seed=arguments.get("seed", 0),
            membership_tol=arguments.get("membership_tol", MEMBERSHIP_TOL),
        )
    if name == "boundary_curve":
        return boundary_curve_table(region=arguments["region"], points=arguments.get("points", 101))
    if name == "gibbs_curve":
        return gibbs_curve_table(
            xi1=arguments["xi1"],
            points=arguments.get("points", 101),
            lambda_max=arguments.get("lambda_max", 10.0),
        )
    if name == "thresholds":
        return thresholds()
    if name == "run_verification":
        return run_verification(
            suite=arguments["suite"],
            samples=arguments.get("samples", 100),
            seed=arguments.get("seed", 0),
            grid=arguments.get("grid", 10),
            restarts=arguments.get("restarts", DEFAULT_RESTARTS),
        )
    raise ValueError(f"Unknown tool: {name}")


@app.call_tool()
async def call_tool(name: str, arguments: dict) -> list[TextContent]:
    debug("server", f"call {name} {sorted(arguments or {})}")
    try:
        result = await to_thread.run_sync(dispatch, name, arguments or {})
        return [TextContent(type="text", text=json.dumps(result, indent=2))]
    except Exception as e:
        return [TextContent(type="text", text=f"Error: {e}")]


async def run_server():
    log("server", "bell-entropy MCP server starting")
    async with stdio_server() as streams:
        await app.run(streams[0], streams[1], app.create_initialization_options())


def main():
    load_dotenv()
    try:
        anyio.run(run_server)
    except KeyboardInterrupt:
        log("server", "stopped")
    except Exception as e:
        log("server", f"Fatal error: {e}")
        import traceback
        traceback.print_exc(file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
