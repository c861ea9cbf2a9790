import sys

from holocode.cli import main

sys.exit(main())
