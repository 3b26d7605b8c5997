"""Write the bundled synthetic family knowledge base to disk."""

from __future__ import annotations

import argparse
from pathlib import Path

from alclearn.datasets import family_kb_lines


def main() -> None:
    """Write data/family.kb (or --out) for the given seed."""
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=Path, default=Path("data/family.kb"))
    args = parser.parse_args()

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text("\n".join(family_kb_lines(args.seed)) + "\n", encoding="utf-8")
    print(f"Wrote {args.out}")


if __name__ == "__main__":
    main()
