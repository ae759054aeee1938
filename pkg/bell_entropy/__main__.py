import sys

from bell_entropy.cli import main

sys.exit(main())
