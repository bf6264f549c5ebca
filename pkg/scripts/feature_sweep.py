"""Run the n-gram feature grid on a corpus and write a leaderboard.

Without --corpus a small synthetic corpus is generated in a temporary
directory, which is enough to exercise the whole pipeline.
"""

import argparse
import sys
import tempfile

from devlid import cli
from devlid.synthetic import synthetic_corpus, write_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", help="corpus root; default: generated synthetic corpus")
    ap.add_argument("--classifier", default="svm,knn,gnb")
    ap.add_argument("--out", default="sweep_out")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid", action="append", help="feature spec (repeatable); default: full n-gram grid")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        root = args.corpus
        if root is None:
            root = str(write_corpus(synthetic_corpus(5, 30, 30, seed=args.seed), tmp))
        argv = ["sweep", "--corpus", root, "--classifier", args.classifier, "--out", args.out, "--seed", str(args.seed)]
        for spec in args.grid or []:
            argv += ["--grid", spec]
        return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())
