import sys

from kabaddi.cli import main

sys.exit(main())
