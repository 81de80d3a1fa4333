import sys

from conglat.cli import main

sys.exit(main())
