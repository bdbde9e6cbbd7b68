#!/usr/bin/env python3
"""Render annotated Hasse diagrams for all bundled scenarios to DOT files.

Feed the output to graphviz, e.g.:  dot -Tpng out/intro_qubit.dot > intro.png
"""

import argparse
from importlib import resources
from pathlib import Path

from qprop.cli import DEMO_SCENARIOS, run_diagram


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out", help="directory for .dot files")
    parser.add_argument("--cluster-blocks", action="store_true")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for filename in sorted(DEMO_SCENARIOS.values()):
        name = filename.removesuffix(".json")
        text = resources.files("qprop").joinpath("scenarios", filename).read_text("utf-8")
        dot = run_diagram(name, text, None, True, args.cluster_blocks)
        target = out_dir / f"{name}.dot"
        target.write_text(dot, "utf-8")
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
