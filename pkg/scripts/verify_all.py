"""Run every built-in invariant suite."""
from _common import run

if __name__ == "__main__":
    run(["verify", "--suite", "all"])
