"""Entry point for running handheadkit as a module."""

from handheadkit.cli.main import app

if __name__ == "__main__":
    app()
