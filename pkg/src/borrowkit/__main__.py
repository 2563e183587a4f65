import sys

from borrowkit.cli import main

sys.exit(main())
