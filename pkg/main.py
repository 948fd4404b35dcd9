import sys

from src.cli import main as cli_main


def main() -> None:
    """Launch the Quaternion Factor command line."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
