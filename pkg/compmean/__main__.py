import sys

from compmean.cli import main

sys.exit(main())
