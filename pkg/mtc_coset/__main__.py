"""Allow ``python -m mtc_coset``."""

import sys

from mtc_coset.cli import main

if __name__ == "__main__":
    sys.exit(main())
