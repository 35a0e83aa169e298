#!/usr/bin/env python3
"""Regenerates data/fixtures. Output is fully determined by the seed."""

import json
import os
import random
import sys

EMOTIONS = ["anger", "anticipation", "disgust", "fear", "joy", "sadness",
            "surprise", "trust"]

# key, name, profile over EMOTIONS on the 0-4 scale
EMOJIS = [
    ("1f621", "pouting face", [4, 0, 2, 0, 0, 0, 0, 0]),
    ("1f620", "angry face", [4, 0, 1, 1, 0, 0, 0, 0]),
    ("1f60a", "smiling face with smiling eyes", [0, 0, 0, 0, 4, 0, 0, 2]),
    ("1f602", "face with tears of joy", [0, 0, 0, 0, 4, 0, 2, 0]),
    ("1f62d", "loudly crying face", [0, 0, 0, 1, 0, 4, 0, 0]),
    ("1f622", "crying face", [0, 0, 0, 0, 0, 3, 0, 0]),
    ("1f633", "flushed face", [0, 0, 0, 2, 0, 0, 3, 0]),
    ("1f631", "face screaming in fear", [0, 0, 0, 4, 0, 0, 3, 0]),
    ("1f449", "backhand index pointing right", [0, 1, 0, 0, 0, 0, 0, 0]),
    ("23f3", "hourglass not done", [0, 3, 0, 0, 0, 0, 0, 0]),
    ("1f922", "nauseated face", [0, 0, 4, 0, 0, 0, 0, 0]),
    ("1f92e", "face vomiting", [0, 0, 4, 0, 0, 1, 0, 0]),
    ("1f632", "astonished face", [0, 0, 0, 0, 0, 0, 4, 0]),
    ("1f62e", "face with open mouth", [0, 0, 0, 1, 0, 0, 3, 0]),
    ("1f91d", "handshake", [0, 0, 0, 0, 2, 0, 0, 4]),
    ("1f64f", "folded hands", [0, 2, 0, 0, 0, 0, 0, 3]),
    ("2764", "red heart", [0, 0, 0, 0, 3, 0, 0, 3]),
    ("1f440", "eyes", [0, 3, 0, 0, 0, 0, 1, 0]),
    ("1f468-200d-1f469-200d-1f467", "family: man, woman, girl",
     [0, 0, 0, 0, 2, 0, 0, 2]),
    ("1f1fa-1f1f8", "flag: United States", [0, 1, 0, 0, 1, 0, 0, 0]),
]

WORDS = {
    "anger": "angry furious rage mad outraged livid hostile fuming irate "
             "resentful",
    "anticipation": "waiting soon expect countdown tomorrow planning eager "
                    "await upcoming hopeful",
    "disgust": "gross disgusting nasty vile revolting filthy yuck sickening "
               "rotten repulsive",
    "fear": "scared afraid terrified panic fear nervous frightened horror "
            "dread anxious",
    "joy": "happy joy delighted glad cheerful laugh fun wonderful celebrate "
           "smile",
    "sadness": "sad cry tears grief lonely heartbroken miserable sorrow "
               "depressed gloomy",
    "surprise": "surprised wow shocked unexpected amazed astonished suddenly "
                "whoa stunned unbelievable",
    "trust": "trust loyal faithful reliable honest friend support depend "
             "promise together",
}
WORDS = {e: w.split() for e, w in WORDS.items()}
FILLER = ("the a and to of in it is this that with for on my you so just "
          "today really day all").split()

# DepecheMood-style labels and the emotion whose words score high on them.
DM_LABELS = {"afraid": "fear", "amused": "surprise", "angry": "anger",
             "annoyed": "anger", "dont_care": None, "happy": "joy",
             "inspired": "trust", "sad": "sadness"}


def glyph(key):
    return "".join(chr(int(cp, 16)) for cp in key.split("-"))


def variant(key, rng):
    """The emoji as it might appear in a tweet."""
    g = glyph(key)
    r = rng.random()
    if "-" not in key and r < 0.1:
        return g + "️"
    if key in ("1f449", "1f64f", "1f91d") and r < 0.25:
        return g + chr(0x1F3FB + rng.randrange(5))
    return g


def corpus(rng, n_docs):
    lines = []
    for _ in range(n_docs):
        if rng.random() < 0.08:
            words = rng.choices(FILLER + WORDS[rng.choice(EMOTIONS)], k=6)
            lines.append(" ".join(words))
            continue
        key, _, profile = rng.choice(EMOJIS)
        weights = [p + 0.15 for p in profile]
        tokens = []
        for _ in range(rng.randint(6, 10)):
            if rng.random() < 0.3:
                tokens.append(rng.choice(FILLER))
            else:
                emotion = rng.choices(EMOTIONS, weights=weights)[0]
                tokens.append(rng.choice(WORDS[emotion]))
        if rng.random() < 0.3:
            tokens[0] = tokens[0].capitalize()
        pos = rng.randrange(len(tokens) + 1)
        e = variant(key, rng)
        if rng.random() < 0.2 and pos > 0:
            tokens[pos - 1] += e  # glued to the previous word
        else:
            tokens.insert(pos, e)
        if rng.random() < 0.15:
            tokens[-1] += rng.choice(["!", "!!", ".", "?"])
        lines.append(" ".join(tokens))
    return "\n".join(lines) + "\n"


def binary_lexicon(rng):
    rows = ["# word\temotion\tflag"]
    for emotion in EMOTIONS:
        for w in WORDS[emotion]:
            rows.append(f"{w}\t{emotion}\t1")
    # Explicit zero rows, as in the NRC word-level file.
    for w in FILLER[:8]:
        for emotion in EMOTIONS:
            rows.append(f"{w}\t{emotion}\t0")
    return "\n".join(rows) + "\n"


def intensity_lexicon(rng):
    """Four emotions only, like the affect intensity lexicon."""
    rows = []
    for emotion in ("anger", "fear", "joy", "sadness"):
        for w in WORDS[emotion]:
            rows.append(f"{w}\t{emotion}\t{rng.uniform(0.5, 1.0):.3f}")
        for w in rng.sample(FILLER, 3):
            rows.append(f"{w}\t{emotion}\t{rng.uniform(0.0, 0.3):.3f}")
    return "\n".join(rows) + "\n"


def depeche_lexicon(rng):
    rows = []
    vocab = [w for e in EMOTIONS for w in WORDS[e]] + FILLER
    home = {w: e for e in EMOTIONS for w in WORDS[e]}
    for w in vocab:
        freq = rng.randint(1, 400)
        for label, target in DM_LABELS.items():
            high = target is not None and home.get(w) == target
            score = rng.uniform(0.4, 0.9) if high else rng.uniform(0.0, 0.2)
            rows.append(f"{w}\t{label}\t{score:.3f}\t{freq}")
    return "\n".join(rows) + "\n"


def ratings(rng, raters):
    lines = []
    minute = 0
    for rater in raters:
        bias = rng.choice([-1, 0, 0, 1])
        for key, _, profile in EMOJIS:
            for emotion, p in zip(EMOTIONS, profile):
                noise = rng.choice([-1, 0, 0, 0, 1])
                score = max(0, min(4, p + noise + (bias if p else 0)))
                minute += 1
                ts = f"2018-03-{1 + minute // 1440:02d}T" \
                     f"{(minute // 60) % 24:02d}:{minute % 60:02d}:00Z"
                lines.append(json.dumps({"rater": rater, "emoji": key,
                                         "emotion": emotion, "score": score,
                                         "ts": ts}))
    return "\n".join(lines) + "\n"


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "data", "fixtures")
    os.makedirs(out, exist_ok=True)
    rng = random.Random(20180325)
    files = {
        "inventory.tsv": "".join(f"{k}\t{n}\n" for k, n, _ in EMOJIS),
        "corpus.txt": corpus(rng, 3000),
        "lexicon_binary.tsv": binary_lexicon(rng),
        "lexicon_intensity.tsv": intensity_lexicon(rng),
        "lexicon_depechemood.tsv": depeche_lexicon(rng),
        "ratings.jsonl": ratings(rng, ["r1", "r2", "r3", "r4", "r5"]),
    }
    for name, text in files.items():
        with open(os.path.join(out, name), "w", encoding="utf-8") as f:
            f.write(text)


if __name__ == "__main__":
    main()
