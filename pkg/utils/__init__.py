"""Run logging and JSON documents for the CLI."""
