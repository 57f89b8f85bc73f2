"""Allow ``python -m eulerreg``."""

import sys

from .cli import main

sys.exit(main())
