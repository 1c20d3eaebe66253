import sys

from src.main.app import main

if __name__ == "__main__":
    sys.exit(main())
