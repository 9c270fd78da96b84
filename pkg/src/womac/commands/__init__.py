"""Command implementations for the womac CLI."""
