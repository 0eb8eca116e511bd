import sys

from bsk.cli import main

sys.exit(main())
