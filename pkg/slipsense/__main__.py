import sys

from slipsense.cli import main

sys.exit(main())
