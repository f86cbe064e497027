"""
Main entry point for running the kha-engine package.
This allows the package to be run with 'python -m src'.
"""

from src.main import cli_main

if __name__ == "__main__":
    cli_main()
