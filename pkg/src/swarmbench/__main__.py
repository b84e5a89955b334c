import sys

from swarmbench.cli import main

sys.exit(main())
