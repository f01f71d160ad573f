"""Allows ``python -m mapkit`` as an alternative to the ``mapkit`` script."""
import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
