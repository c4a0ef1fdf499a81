"""Shared output location for the gallery scripts."""

import os
import sys

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(os.path.abspath(__file__)), "_output")
os.makedirs(OUT, exist_ok=True)


def out(name):
    return os.path.join(OUT, name)
