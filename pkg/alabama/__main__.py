"""
Runs the alabama command line interface.
Usage example:
  python -m alabama apportion --pop 53,33,14 -n 10
"""

import sys

from alabama.cli import main

if __name__ == "__main__":
    sys.exit(main())
