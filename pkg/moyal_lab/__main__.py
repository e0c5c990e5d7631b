"""python -m moyal_lab — same as the moyal-lab console script."""

import sys

from moyal_lab.cli.main import main

sys.exit(main())
