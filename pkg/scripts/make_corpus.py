"""Regenerate the bundled instance corpus.

    python3 scripts/make_corpus.py [--out corpus] [--per-problem 20] [--seed 0]
"""

import argparse

from camelot.corpus import write_corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="corpus")
    ap.add_argument("--per-problem", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    entries = write_corpus(args.out, args.per_problem, args.seed)
    print(f"wrote {len(entries)} instances to {args.out}")


if __name__ == "__main__":
    main()
