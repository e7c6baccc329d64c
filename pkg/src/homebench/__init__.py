"""homebench: a deterministic household-world simulator and diagnostic
benchmark harness for embodied agents."""

__version__ = "0.1.0"
