#!/usr/bin/env python3
"""Run the arrangement analyzer test scripts, engine layers first.

Usage: run_all_tests.py [name ...]   (substrings select files, e.g. ``groebner cli``)
"""

import os
import subprocess
import sys
import time

ORDER = ["test_polycore.py", "test_groebner.py", "test_singcurve.py", "test_logtangent.py", "test_cli.py"]
TESTS_DIR = os.path.dirname(os.path.abspath(__file__))


def select(filters):
    present = {f for f in os.listdir(TESTS_DIR) if f.startswith("test_") and f.endswith(".py")}
    names = [f for f in ORDER if f in present] + sorted(present - set(ORDER))
    if filters:
        names = [f for f in names if any(part in f for part in filters)]
    return names


def run_script(name):
    """Run one test script in its own interpreter; returns (ok, seconds)."""
    print(f"\n--- {name} " + "-" * max(0, 56 - len(name)))
    start = time.perf_counter()
    try:
        completed = subprocess.run(
            [sys.executable, os.path.join(TESTS_DIR, name)],
            capture_output=True,
            text=True,
            cwd=TESTS_DIR,
        )
    except OSError as e:
        print(f"could not start {name}: {e}")
        return False, time.perf_counter() - start
    print(completed.stdout, end="")
    if completed.stderr:
        print("STDERR:", completed.stderr)
    return completed.returncode == 0, time.perf_counter() - start


def main():
    names = select(sys.argv[1:])
    if not names:
        print(f"no test script matches {' '.join(sys.argv[1:])}")
        return 1
    print(f"Arrangement Analyzer Test Suite ({len(names)} scripts)")
    if os.environ.get("ARRANGEMENT_SLOW_TESTS"):
        print("slow rational checks enabled")

    outcomes = [(name, *run_script(name)) for name in names]

    print("\n" + "=" * 60)
    for name, ok, seconds in outcomes:
        print(f"{name:<24} {'ok' if ok else 'FAILED':<8} {seconds:7.1f} s")
    failures = [name for name, ok, _ in outcomes if not ok]
    print("=" * 60)
    if failures:
        print(f"{len(failures)} of {len(outcomes)} scripts failed: {', '.join(failures)}")
        return 1
    print(f"all {len(outcomes)} scripts passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
