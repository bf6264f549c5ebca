"""Write a synthetic separable Devanagari corpus to disk (<out>/<language>/<doc>.txt)."""

import argparse

from devlid.synthetic import synthetic_corpus, write_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--languages", type=int, default=10)
    ap.add_argument("--docs", type=int, default=100, help="documents per language")
    ap.add_argument("--tokens", type=int, default=50, help="tokens per document")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    corpus = synthetic_corpus(args.languages, args.docs, args.tokens, seed=args.seed)
    root = write_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} documents in {len(corpus.labels)} languages to {root}")


if __name__ == "__main__":
    main()
