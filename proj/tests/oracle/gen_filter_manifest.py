#!/usr/bin/env python3
# Copyright (C) 2026 The simulst Authors
# SPDX-License-Identifier: Apache-2.0
#
"""Builds the 200-line toy filtering manifest and its expected outcome.

Every record is constructed with a known character ratio (Unicode scalar
counts of the trimmed texts) and NLL, and the expected report is computed
here with plain Python arithmetic.

usage: gen_filter_manifest.py OUT_DIR
"""

import json
import pathlib
import random
import sys

MIN_RATIO, MAX_RATIO, NLL_MAX = 0.8, 1.6, 4.0
SRC_ALPHABET = "abcdefghijklmnopqrstuvwxyz"
TGT_ALPHABET = "abcdefghijklmnopqrstuvwxyzäöüßéèàç"


def text(rng, n, alphabet):
    chars = []
    for i in range(n):
        if 0 < i < n - 1 and chars[-1] != " " and rng.random() < 0.18:
            chars.append(" ")
        else:
            chars.append(rng.choice(alphabet))
    return "".join(chars)


def main():
    out = pathlib.Path(sys.argv[1])
    rng = random.Random(20240601)
    header = "id\taudio_frames\ttranscript\ttranslation\tnll\torigin"
    lines = [header]
    expected = {"total": 0, "kept": 0, "invalid": 0,
                "rejected": {"char_ratio": 0, "chars_per_frame": 0, "nll": 0}}
    kept = []

    # (source chars, target chars) pairs pinned on and around the bounds.
    edges = [(10, 8), (20, 16), (5, 8), (10, 16), (25, 40), (100, 79),
             (100, 161), (50, 39), (50, 81), (30, 24), (30, 48), (7, 5)]
    invalid_slots = {17: "fields", 44: "frames", 71: "zero_frames",
                     98: "empty_tgt", 125: "nll", 152: "fields",
                     179: "negative_nll", 199: "origin"}

    for i in range(200):
        rid = f"utt{i:03d}"
        frames = rng.randint(80, 2000)
        expected["total"] += 1
        kind = invalid_slots.get(i)
        if kind:
            expected["invalid"] += 1
            src = text(rng, 20, SRC_ALPHABET)
            tgt = text(rng, 22, TGT_ALPHABET)
            row = {
                "fields": f"{rid}\t{frames}\t{src}\t{tgt}\t1.0",
                "frames": f"{rid}\tabc\t{src}\t{tgt}\t1.0\tnative",
                "zero_frames": f"{rid}\t0\t{src}\t{tgt}\t1.0\tnative",
                "empty_tgt": f"{rid}\t{frames}\t{src}\t   \t1.0\tnative",
                "nll": f"{rid}\t{frames}\t{src}\t{tgt}\tn/a\tnative",
                "negative_nll": f"{rid}\t{frames}\t{src}\t{tgt}\t-0.5\tnative",
                "origin": f"{rid}\t{frames}\t{src}\t{tgt}\t1.0\tcrawled",
            }[kind]
            lines.append(row)
            continue

        if i % 16 == 0:
            n_src, n_tgt = edges[(i // 16) % len(edges)]
        else:
            n_src = rng.randint(8, 120)
            n_tgt = max(1, round(n_src * rng.uniform(0.55, 1.9)))
        src = text(rng, n_src, SRC_ALPHABET)
        tgt = text(rng, n_tgt, TGT_ALPHABET)
        if rng.random() < 0.3:
            src = " " + src + "  "

        r = rng.random()
        if i % 23 == 0:
            nll = 4.0
        elif r < 0.35:
            nll = None
        else:
            nll = round(rng.uniform(0.3, 6.5), 3)
        origin = "synthetic" if rng.random() < 0.4 else "native"
        nll_field = "" if nll is None else repr(nll)
        lines.append(f"{rid}\t{frames}\t{src}\t{tgt}\t{nll_field}\t{origin}")

        ratio = len(tgt.strip()) / len(src.strip())
        if not (MIN_RATIO <= ratio <= MAX_RATIO):
            expected["rejected"]["char_ratio"] += 1
        elif nll is not None and nll > NLL_MAX:
            expected["rejected"]["nll"] += 1
        else:
            expected["kept"] += 1
            kept.append(rid)

    out.mkdir(parents=True, exist_ok=True)
    (out / "toy_manifest.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (out / "golden_report.json").write_text(
        json.dumps(expected, indent=2) + "\n", encoding="utf-8")
    (out / "golden_kept_ids.txt").write_text("\n".join(kept) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
