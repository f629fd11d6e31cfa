import sys

from barewire.cli import main

sys.exit(main())
