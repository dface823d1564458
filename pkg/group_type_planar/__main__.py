"""Entry point for running the engine with python -m."""

import sys

from group_type_planar.cli import main


if __name__ == "__main__":
    sys.exit(main())
