import sys

from mcwave.main import main

sys.exit(main())
