"""Command-line front end: run documents, built-in problems, commands and artifacts."""
