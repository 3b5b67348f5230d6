import sys

from probgkat.cli import main

sys.exit(main())
