import sys

from weakplateau.cli import main

sys.exit(main())
