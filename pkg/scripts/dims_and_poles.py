"""Minkowski dimension estimates for the commutative scenes and pole lattices for all systems."""
import os

from _common import SCENES, SYSTEMS, run

if __name__ == "__main__":
    for name in ("cantor", "interval", "point"):
        print(f"# dim {name}")
        run(["dim", os.path.join(SCENES, f"{name}.json")])
    for name in ("cantor", "example2", "example3", "example4"):
        print(f"# poles {name}")
        run(["poles", os.path.join(SYSTEMS, f"{name}.json"), "--count", "3"])
