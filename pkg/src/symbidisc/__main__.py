import sys

from symbidisc.cli import main

sys.exit(main())
