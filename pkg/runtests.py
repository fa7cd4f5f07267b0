#!/usr/bin/env python3
import os.path
import subprocess
import sys


def main():
    # Run the tests from the checkout so the package under test is this one.
    proc = subprocess.run(
        [sys.executable, '-u', '-m', 'pyautotune.tests', *sys.argv[1:]],
        cwd=os.path.dirname(__file__) or None,
    )
    sys.exit(proc.returncode)


if __name__ == "__main__":
    main()
