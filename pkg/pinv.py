#!/usr/bin/env python3
"""Command-line launcher: python pinv.py <command> --blocks 2,1,3,2"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
