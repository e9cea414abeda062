"""Entry point: ``python -m src.main``."""
from src.cli.workbench import cli


def main() -> None:
    cli(prog_name="henson-workbench")


if __name__ == "__main__":
    main()
