import sys
from smti_restricted.controllers.cli import main


if __name__ == "__main__":
    sys.exit(main())
