import sys

from adlab.cli import main

sys.exit(main())
