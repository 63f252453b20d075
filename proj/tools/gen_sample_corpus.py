#!/usr/bin/env python3
# Copyright 2026 The mgram Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled bilingual sample corpus.

Two synthetic languages share most of the Latin alphabet. The "fr" analog
uses accented vowels, the "en" analog uses '&' and '#'. Sentences follow a
Zipfian word-bigram process. A slice of each vocabulary is held out of the
training text and injected into the test and dev lines.
"""

import argparse
import pathlib
import random

LANGS = {
    "fr": {
        "onsets": ["", "", "b", "c", "d", "f", "g", "j", "l", "m", "n", "p",
                   "r", "s", "t", "v", "ch", "gr", "pr", "tr", "br", "pl",
                   "cl", "qu"],
        "nuclei": ["a", "e", "i", "o", "u", "é", "è", "ou", "ai", "eau",
                   "an", "on", "in", "eu", "oi", "ê", "à"],
        "codas": ["", "", "", "", "r", "s", "l", "n", "t"],
        "suffixes": ["e", "es", "er", "ment", "tion", "eur", "ais", "ée"],
        "specials": [],
    },
    "en": {
        "onsets": ["", "", "b", "c", "d", "f", "g", "h", "k", "l", "m", "n",
                   "p", "r", "s", "t", "w", "th", "sh", "st", "str", "bl",
                   "cr", "wh", "y"],
        "nuclei": ["a", "e", "i", "o", "u", "ee", "oo", "ea", "ay", "ow",
                   "y"],
        "codas": ["", "", "", "k", "ck", "ng", "t", "d", "s", "ll", "nd",
                  "rt"],
        "suffixes": ["ing", "ed", "er", "ly", "s", "ness", "ful"],
        "specials": ["&", "#"],
    },
}


def make_word(rng, spec):
    syllables = rng.choices([1, 2, 3, 4], weights=[3, 5, 3, 1])[0]
    word = "".join(
        rng.choice(spec["onsets"]) + rng.choice(spec["nuclei"]) +
        rng.choice(spec["codas"]) for _ in range(syllables))
    if rng.random() < 0.35:
        word += rng.choice(spec["suffixes"])
    return word


def make_vocabulary(rng, spec, size):
    words = []
    seen = set()
    while len(words) < size:
        w = make_word(rng, spec)
        if 2 <= len(w) <= 14 and w not in seen:
            seen.add(w)
            words.append(w)
    return words


class BigramSource:
    def __init__(self, rng, words, exponent=1.05, fanout=8, stickiness=0.6):
        self.rng = rng
        self.words = words
        self.weights = [1.0 / (r + 1) ** exponent for r in range(len(words))]
        self.successors = [
            rng.choices(range(len(words)), weights=self.weights, k=fanout)
            for _ in words
        ]
        self.stickiness = stickiness

    def first(self):
        return self.rng.choices(range(len(self.words)), weights=self.weights)[0]

    def next(self, prev):
        if self.rng.random() < self.stickiness:
            return self.rng.choice(self.successors[prev])
        return self.first()


def sentence(rng, source, spec, words, held_out=None, oov_rate=0.0):
    length = rng.randint(4, 9)
    idx = source.first()
    out = []
    for i in range(length):
        w = words[idx]
        if held_out and i > 0 and rng.random() < oov_rate:
            w = rng.choice(held_out)
        if spec["specials"] and rng.random() < 0.03:
            out.append("&")
        if spec["specials"] and rng.random() < 0.02:
            w = "#" + w
        if rng.random() < 0.08 and i + 1 < length:
            w += ","
        out.append(w)
        idx = source.next(idx)
    out[0] = out[0][0].upper() + out[0][1:]
    return " ".join(out) + "."


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/sample")
    parser.add_argument("--seed", type=int, default=20260101)
    parser.add_argument("--vocab", type=int, default=1800)
    parser.add_argument("--train-lines", type=int, default=2000)
    parser.add_argument("--test-lines", type=int, default=100)
    parser.add_argument("--dev-lines", type=int, default=50)
    parser.add_argument("--held-out", type=float, default=0.1)
    parser.add_argument("--oov-rate", type=float, default=0.1)
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    for lang, spec in LANGS.items():
        vocab = make_vocabulary(rng, spec, args.vocab)
        rng.shuffle(vocab)
        n_held = int(len(vocab) * args.held_out)
        # Held-out words come from the middle of the frequency ranking.
        held = vocab[len(vocab) // 3:len(vocab) // 3 + n_held]
        train_words = [w for w in vocab if w not in set(held)]
        source = BigramSource(rng, train_words)
        train = [sentence(rng, source, spec, train_words)
                 for _ in range(args.train_lines)]
        alphabet = set("".join(train))

        def held_out_lines(count):
            lines = []
            while len(lines) < count:
                s = sentence(rng, source, spec, train_words, held,
                             args.oov_rate)
                if set(s) <= alphabet:
                    lines.append(s)
            return lines

        test = held_out_lines(args.test_lines)
        dev = held_out_lines(args.dev_lines)
        for name, lines in (("train", train), ("test", test), ("dev", dev)):
            path = out / f"{lang}.{name}.txt"
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
