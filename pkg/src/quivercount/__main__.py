import sys

from quivercount.cli import main

sys.exit(main())
