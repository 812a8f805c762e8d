import sys

from reebli.cli import main

sys.exit(main())
