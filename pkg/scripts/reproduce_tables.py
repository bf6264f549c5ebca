"""Recompute per-language metrics from the printed confusion matrices.

Prints, for each fixture pair, our half-up 2-decimal values next to the
printed ones, then macro, weighted and micro summaries against the printed
summary row.  Mismatches are marked with '*'.
"""

import argparse
from pathlib import Path

from devlid.evaluation import ConfusionMatrix, fmt_half_up, metrics, micro_average, weighted_average

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
PAIRS = [
    ("SVM, char+word trigrams", "svm_char_word_confusion.tsv", "svm_char_word_per_language.tsv"),
    ("CNN, 500 epochs", "cnn_confusion.tsv", "cnn_per_language.tsv"),
]


def read_printed(path: Path) -> dict[str, list[str]]:
    rows = [ln.split("\t") for ln in path.read_text(encoding="utf-8").strip("\n").split("\n")[1:]]
    return {r[0]: r[1:] for r in rows}


def line(name, values, printed):
    ours = [fmt_half_up(v, 2) for v in values]
    cells = [f"{o}{'' if o == p else '*'}/{p}" for o, p in zip(ours, printed)]
    return f"{name:<16}" + "".join(f"{c:>13}" for c in cells)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", type=Path, default=FIXTURES)
    args = ap.parse_args()
    mismatches = 0
    for title, cm_file, table_file in PAIRS:
        cm = ConfusionMatrix.from_tsv((args.fixtures / cm_file).read_text(encoding="utf-8"))
        rep = metrics(cm)
        printed = read_printed(args.fixtures / table_file)
        summary = printed["Avg / Total"]
        print(f"== {title}: accuracy {int(cm.tp.sum())}/{cm.total} = {rep.accuracy:.4f}")
        print(f"{'':<16}" + "".join(f"{h:>13}" for h in ("precision", "recall", "f1")))
        rows = [(lab, rep.per_class(lab), printed[lab]) for lab in cm.labels]
        rows += [
            ("macro", rep.macro, summary),
            ("weighted", weighted_average(rep, cm), summary),
            ("micro", micro_average(cm), summary),
        ]
        for name, values, ref in rows:
            text = line(name, values, ref)
            if name not in ("weighted", "micro") and "*" in text:
                mismatches += 1
            print(text)
        print()
    print(f"per-class/macro mismatches: {mismatches} row(s)")


if __name__ == "__main__":
    main()
