#!/usr/bin/env python3
"""Worst-case bits per sound, counted straight from a vocabulary file.

B_max is the base-2 log of the number of distinct lexical codes, i.e. the
sum over features of log2(alphabet size), sentinel labels included. This
script reads only the tab-separated vocabulary format and shares no code
with the Rust implementation.

usage: label_count_oracle.py [VOCABULARY.tsv] [--per-feature]
"""

import math
import sys
from collections import OrderedDict
from pathlib import Path

DEFAULT = Path(__file__).resolve().parent.parent / "crates" / "core" / "data" / "vocabulary.tsv"


def label_counts(path):
    features = OrderedDict()
    labels = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if cols[0] == "feature":
            features[cols[2]] = 0
            labels[cols[2]] = set()
        elif cols[0] == "bin":
            name, label = cols[1], cols[2]
            if label in labels[name]:
                raise SystemExit(f"duplicate label {label!r} for {name}")
            labels[name].add(label)
            features[name] += 1
    return features


def main(argv):
    args = [a for a in argv if not a.startswith("--")]
    path = args[0] if args else DEFAULT
    counts = label_counts(path)
    if len(counts) != 47:
        raise SystemExit(f"expected 47 features, found {len(counts)}")
    if "--per-feature" in argv:
        for name, n in counts.items():
            print(f"{name}\t{n}\t{math.log2(n):.6f}")
    print(f"{sum(math.log2(n) for n in counts.values()):.9f}")


if __name__ == "__main__":
    main(sys.argv[1:])
