# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Run the lrsense command line from a source checkout."""

import sys

from lrsense.cli import main

if __name__ == "__main__":
    sys.exit(main())
