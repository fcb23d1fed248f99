"""Core utilities: settings, errors, random streams and bit packing."""
