import sys

from postulate.cli import main

sys.exit(main())
