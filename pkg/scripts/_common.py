import argparse
import os
import sys

from fraczeta.cli import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCENES = os.path.join(ROOT, "scenes")
SYSTEMS = os.path.join(ROOT, "systems")


def parser(description: str, default_name: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--out", default=os.path.join(ROOT, "out", default_name))
    p.add_argument("--jobs", type=int, default=1)
    return p


def run(argv: list[str]) -> None:
    code = main(argv)
    if code != 0:
        sys.exit(code)
