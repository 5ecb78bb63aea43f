import sys

from advice50.cli import main

sys.exit(main())
