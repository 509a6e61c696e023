"""PO-QA - run the command-line interface with ``python -m poqa``."""

import sys

from .cli.main import main

if __name__ == "__main__":
    sys.exit(main())
