import sys

from arrowbench.cli import main

sys.exit(main())
