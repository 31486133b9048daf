import sys

from cogmaplint.cli import main

sys.exit(main())
