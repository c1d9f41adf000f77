"""Einstiegspunkt für ``python -m toeplitz_tau``."""

import sys

from .cli import main

sys.exit(main())
