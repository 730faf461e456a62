#!/usr/bin/env python3
"""
SympOrtho - orthospectra of maximal representations into Sp(2n,R)
Basmajian-type identities and inequalities, checked on truncated orthospectra
"""

import sys

from src.reporting.cli import main

if __name__ == "__main__":
    sys.exit(main())
