import sys

from wvnn.wvnncli import main

if __name__ == "__main__":
    sys.exit(main())
