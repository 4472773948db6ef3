#!/usr/bin/env python3
"""Run the comparison corpus and print one table row per (sequence, hom).

Usage: python scripts/run_corpus.py
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from atkernel.corpus import corpus_entries, normal_homs_for
from atkernel.cousin import cousin_to_text
from atkernel.polyforms import poly_to_text
from atkernel.semireg import compare_semireg


def main() -> int:
    failures = 0
    for entry in corpus_entries():
        seq_text = " ; ".join(poly_to_text(f, entry.var_names) for f in entry.ideal.polys)
        for idx, phi in enumerate(normal_homs_for(entry)):
            start = time.monotonic()
            rep = compare_semireg(phi)
            elapsed = time.monotonic() - start
            values = ", ".join(poly_to_text(v, entry.var_names) for v in phi.values)
            print(
                f"[{seq_text}] hom#{idx} ({values}): {rep.verdict} "
                f"({elapsed:.2f}s)"
            )
            print(f"    {cousin_to_text(rep.mu_route, entry.var_names)}")
            if rep.verdict == "fail":
                failures += 1
    print(f"failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
