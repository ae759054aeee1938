"""Bell-CHSH parameter vs entropy compatibility regions for two-qubit states."""

__version__ = "1.0.0"
