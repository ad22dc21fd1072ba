"""Forward-model planning agents and a benchmark harness on small grid games."""

__version__ = "0.1.0"
