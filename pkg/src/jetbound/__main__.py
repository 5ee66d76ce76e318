import sys

from jetbound.cli import main

sys.exit(main())
