"""Run state, run directories and file formats."""
