import sys

from macaware.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
