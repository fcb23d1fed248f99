"""Learning single-output Boolean functions from care sets and compiling them to AIGs."""

__version__ = "0.1.0"
