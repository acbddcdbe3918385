import sys

from f1ev.cli import main

sys.exit(main())
