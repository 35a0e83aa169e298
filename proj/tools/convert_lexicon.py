#!/usr/bin/env python3
"""Convert third-party lexicon layouts into the TSV files emotag reads.

  emolex       word<TAB>emotion<TAB>0|1 (EmoLex word-level file). Rows for
               positive/negative are dropped; the rest pass through.
  nrc-intensity
               term<TAB>score<TAB>emotion with a header line (NRC Affect
               Intensity). Written as word<TAB>emotion<TAB>score.
  depechemood  wide table: a word column, one column per label and an
               optional freq column, tab or comma separated. Written as
               word<TAB>label<TAB>score<TAB>freq, one row per label.

Output goes to stdout unless -o is given.
"""

import argparse
import csv
import io
import sys

PLUTCHIK = {"anger", "anticipation", "disgust", "fear", "joy", "sadness",
            "surprise", "trust"}


def convert_emolex(lines):
    out = []
    for row in csv.reader(lines, delimiter="\t"):
        if not row or row[0].startswith("#"):
            continue
        if len(row) != 3:
            raise ValueError(f"expected 3 columns, got {row!r}")
        word, emotion, flag = (c.strip() for c in row)
        if emotion.lower() not in PLUTCHIK:
            continue
        out.append(f"{word.lower()}\t{emotion.lower()}\t{int(flag)}")
    return out


def convert_nrc_intensity(lines):
    out = []
    reader = csv.reader(lines, delimiter="\t")
    for row in reader:
        if not row or row[0].startswith("#"):
            continue
        if row[0].strip().lower() == "term":
            continue
        if len(row) != 3:
            raise ValueError(f"expected 3 columns, got {row!r}")
        term, score, emotion = (c.strip() for c in row)
        float(score)
        out.append(f"{term.lower()}\t{emotion.lower()}\t{score}")
    return out


def convert_depechemood(lines):
    text = "".join(lines)
    dialect = "\t" if "\t" in text.splitlines()[0] else ","
    reader = csv.reader(io.StringIO(text), delimiter=dialect)
    header = [h.strip().lower() for h in next(reader)]
    freq_col = header.index("freq") if "freq" in header else None
    labels = [(i, h) for i, h in enumerate(header)
              if i > 0 and i != freq_col]
    out = []
    for row in reader:
        if not row:
            continue
        # DepecheMood++ keys look like "word#pos"; keep the word.
        word = row[0].strip().split("#")[0].lower()
        freq = row[freq_col].strip() if freq_col is not None else ""
        for i, label in labels:
            line = f"{word}\t{label}\t{row[i].strip()}"
            out.append(line + (f"\t{freq}" if freq else ""))
    return out


CONVERTERS = {
    "emolex": convert_emolex,
    "nrc-intensity": convert_nrc_intensity,
    "depechemood": convert_depechemood,
}


def self_test():
    assert convert_emolex(["abandon\tfear\t1\n", "abandon\tnegative\t1\n",
                           "abandon\tjoy\t0\n"]) == [
        "abandon\tfear\t1", "abandon\tjoy\t0"]
    assert convert_nrc_intensity(["term\tscore\tAffectDimension\n",
                                  "outraged\t0.964\tanger\n"]) == [
        "outraged\tanger\t0.964"]
    assert convert_depechemood([
        "\tAFRAID\tHAPPY\tfreq\n", "cheer#v\t0.1\t0.8\t42\n"]) == [
        "cheer\tafraid\t0.1\t42", "cheer\thappy\t0.8\t42"]
    assert convert_depechemood(["word,SAD\n", "gloom,0.7\n"]) == [
        "gloom\tsad\t0.7"]
    print("converter self-test ok")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("format", nargs="?", choices=sorted(CONVERTERS))
    parser.add_argument("input", nargs="?")
    parser.add_argument("-o", "--output")
    parser.add_argument("--self-test", action="store_true")
    args = parser.parse_args()
    if args.self_test:
        self_test()
        return
    if not args.format or not args.input:
        parser.error("format and input are required")
    with open(args.input, encoding="utf-8") as f:
        rows = CONVERTERS[args.format](f.readlines())
    text = "".join(r + "\n" for r in rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
