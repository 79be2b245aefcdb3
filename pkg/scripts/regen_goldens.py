#!/usr/bin/env python3
"""Regenerate the byte-exact golden artifacts used by the format tests.

Run from the repository root:

    python3 scripts/regen_goldens.py

Goldens are environment-pinned: dataset CSV bytes depend on the local
BLAS/LAPACK build, so regenerate them whenever the numerical environment
changes and commit the result together with that change.
"""

import os
import shutil
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from dsm2d.cli import run_repro   # noqa: E402


def main() -> None:
    dest = os.path.join(os.path.dirname(__file__), "..", "tests", "goldens", "example1")
    dest = os.path.abspath(dest)
    if os.path.isdir(dest):
        shutil.rmtree(dest)
    os.makedirs(dest, exist_ok=True)
    run_repro(1, None, dest)
    print(f"goldens written to {dest}")


if __name__ == "__main__":
    main()
