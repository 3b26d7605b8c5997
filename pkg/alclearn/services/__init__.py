"""Orchestration used by the command line."""
