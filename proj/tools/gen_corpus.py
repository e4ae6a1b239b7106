#!/usr/bin/env python3
"""Generate the bundled evaluation corpus.

Produces a small Middle-Low-German-flavoured corpus of POS-tagged documents
in the one-token-per-line `token<TAB>tag` format. The text is sampled from a
stochastic clause grammar with a HiTS-like tag inventory, ambiguous function
words (is: VAFIN/VKFIN, dat: DDS/KOUS/DDART, ...), Zipf-distributed open-class
vocabularies with class-typical suffixes and per-document spelling variation.
No sentence punctuation is generated apart from sparse virgules.

Output is fully determined by --seed.
"""

import argparse
import os
import random

ONSETS = ["b", "d", "g", "h", "k", "l", "m", "n", "r", "s", "t", "v", "w",
          "br", "dr", "gr", "kl", "sl", "st", "sw", "tr", "vr", "sch"]
NUCLEI = ["a", "e", "i", "o", "u", "ei", "ie", "oe", "ue", "au"]
CODAS = ["", "", "", "n", "r", "l", "t", "k", "ch", "s", "ld", "nt", "rk"]

NOUN_SUFFIXES = ["e", "inge", "heit", "schop", "er", "e", "en", "nisse"]
ADJ_SUFFIXES = ["lik", "ich", "el", "e", "er"]


def syllable(rng):
    return rng.choice(ONSETS) + rng.choice(NUCLEI) + rng.choice(CODAS)


def stem(rng, syllables):
    return "".join(syllable(rng) for _ in range(syllables))


def zipf_lexicon(rng, size, make):
    words = []
    seen = set()
    while len(words) < size:
        w = make(rng)
        if w not in seen:
            seen.add(w)
            words.append(w)
    weights = [1.0 / (rank + 1) ** 1.05 for rank in range(size)]
    return words, weights


class Lexicon:
    def __init__(self, rng):
        self.nouns, self.noun_w = zipf_lexicon(
            rng, 1400, lambda r: stem(r, r.choice([1, 1, 2])) + r.choice(NOUN_SUFFIXES))
        self.names, self.name_w = zipf_lexicon(
            rng, 250, lambda r: (stem(r, r.choice([1, 2])) + r.choice(["", "e", "o", "ard", "olf"])).capitalize())
        self.adjs, self.adj_w = zipf_lexicon(
            rng, 300, lambda r: stem(r, r.choice([1, 2])) + r.choice(ADJ_SUFFIXES))
        verb_stems, self.verb_w = zipf_lexicon(rng, 500, lambda r: stem(r, r.choice([1, 1, 2])))
        self.verb_stems = verb_stems
        self.advs, self.adv_w = zipf_lexicon(
            rng, 60, lambda r: stem(r, 1) + r.choice(["e", "en", "lken", "s"]))


FUNCTION = {
    "DDART": (["de", "dat", "den", "der", "des", "dem"], [10, 5, 6, 4, 3, 4]),
    "DIART": (["en", "ene", "enen", "eyn"], [6, 4, 3, 1]),
    "DDS": (["dat", "dit", "de", "desse", "denen"], [8, 4, 2, 2, 1]),
    "DRELS": (["de", "dat", "den", "der"], [6, 3, 2, 1]),
    "PPER": (["he", "se", "wy", "gy", "it", "ek", "em", "en"], [8, 6, 5, 3, 4, 4, 2, 2]),
    "PPOSAT": (["syn", "ere", "unse", "iuwe", "myn"], [5, 3, 3, 2, 2]),
    "AP": (["to", "in", "van", "mit", "up", "vor", "na", "by", "vmme"], [9, 8, 8, 6, 5, 3, 3, 2, 2]),
    "KON": (["vnde", "unde", "edder", "men", "ok"], [12, 6, 3, 2, 3]),
    "KOUS": (["dat", "wente", "also", "wan", "oft", "alse"], [8, 4, 3, 3, 2, 3]),
    "PTKNEG": (["nicht", "nich", "nen"], [5, 3, 2]),
    "PTKZU": (["to"], [1]),
    "AVD": (["ok", "so", "dar", "nu", "ock", "io", "alle", "ouer"], [5, 6, 5, 4, 2, 2, 2, 2]),
    "VAFIN": (["is", "hebbe", "hefft", "sint", "was", "wart", "worden", "hadde"], [10, 4, 6, 5, 5, 3, 2, 4]),
    "VKFIN": (["is", "sint", "was", "wart", "blift"], [10, 5, 6, 3, 1]),
    "VMFIN": (["schal", "mach", "wil", "scholen", "moghen", "scolde"], [6, 4, 4, 3, 2, 2]),
    "CARDA": (["twe", "dre", "veer", "vyff", "teyn", "hundert"], [5, 4, 3, 2, 2, 1]),
}


def sample(rng, words, weights):
    return rng.choices(words, weights=weights, k=1)[0]


def fn(rng, tag):
    words, weights = FUNCTION[tag]
    return (sample(rng, words, weights), tag)


def verb_form(rng, lex, tag):
    s = sample(rng, lex.verb_stems, lex.verb_w)
    if tag == "VVFIN":
        return s + rng.choice(["et", "t", "en", "e"])
    if tag == "VVINF":
        return s + "en"
    if tag == "VVPP":
        return "ge" + s + rng.choice(["et", "en", "t"])
    raise ValueError(tag)


def number(rng):
    return str(rng.choice([rng.randint(1, 40), rng.randint(1200, 1550)]))


class Grammar:
    def __init__(self, rng, lex):
        self.rng = rng
        self.lex = lex

    def noun(self):
        return (sample(self.rng, self.lex.nouns, self.lex.noun_w), "NA")

    def name(self):
        return (sample(self.rng, self.lex.names, self.lex.name_w), "NE")

    def adja(self):
        return (sample(self.rng, self.lex.adjs, self.lex.adj_w), "ADJA")

    def adjd(self):
        return (sample(self.rng, self.lex.adjs, self.lex.adj_w), "ADJD")

    def np(self):
        r = self.rng.random()
        if r < 0.16:
            return [fn(self.rng, "PPER")]
        if r < 0.26:
            return [self.name()]
        out = []
        d = self.rng.random()
        if d < 0.55:
            out.append(fn(self.rng, "DDART"))
        elif d < 0.67:
            out.append(fn(self.rng, "DIART"))
        elif d < 0.77:
            out.append(fn(self.rng, "PPOSAT"))
        elif d < 0.82:
            out.append(fn(self.rng, "DDS"))
        elif d < 0.87:
            out.append((number(self.rng) if self.rng.random() < 0.4 else fn(self.rng, "CARDA")[0], "CARDA"))
        if self.rng.random() < 0.25:
            out.append(self.adja())
        out.append(self.noun())
        if self.rng.random() < 0.08:
            out.append(fn(self.rng, "DRELS"))
            out.extend(self.np())
            out.append((verb_form(self.rng, self.lex, "VVFIN"), "VVFIN"))
        return out

    def pp(self):
        return [fn(self.rng, "AP")] + self.np()

    def predicate(self):
        r = self.rng.random()
        out = []
        if r < 0.28:
            out.append((verb_form(self.rng, self.lex, "VVFIN"), "VVFIN"))
            if self.rng.random() < 0.6:
                out.extend(self.np())
        elif r < 0.46:
            # copula: is + adjective / noun phrase
            out.append(fn(self.rng, "VKFIN"))
            if self.rng.random() < 0.15:
                out.append(fn(self.rng, "PTKNEG"))
            out.extend([self.adjd()] if self.rng.random() < 0.6 else self.np())
        elif r < 0.66:
            # auxiliary: is + participle
            out.append(fn(self.rng, "VAFIN"))
            if self.rng.random() < 0.4:
                out.extend(self.np() if self.rng.random() < 0.5 else self.pp())
            out.append((verb_form(self.rng, self.lex, "VVPP"), "VVPP"))
        elif r < 0.82:
            out.append(fn(self.rng, "VMFIN"))
            if self.rng.random() < 0.5:
                out.extend(self.np())
            out.append((verb_form(self.rng, self.lex, "VVINF"), "VVINF"))
        else:
            out.append((verb_form(self.rng, self.lex, "VVFIN"), "VVFIN"))
            out.extend(self.pp())
        if self.rng.random() < 0.2:
            out.append((sample(self.rng, self.lex.advs, self.lex.adv_w), "AVD") if self.rng.random() < 0.5
                       else fn(self.rng, "AVD"))
        if self.rng.random() < 0.1:
            out.append(fn(self.rng, "PTKZU"))
            out.append((verb_form(self.rng, self.lex, "VVINF"), "VVINF"))
        return out

    def clause(self):
        out = []
        r = self.rng.random()
        if r < 0.25:
            out.append(fn(self.rng, "KON"))
        elif r < 0.35:
            out.append(fn(self.rng, "KOUS"))
        if self.rng.random() < 0.12:
            # demonstrative subject: "dat is ..."
            out.append(fn(self.rng, "DDS"))
        else:
            out.extend(self.np())
        if self.rng.random() < 0.15:
            out.extend(self.pp())
        out.extend(self.predicate())
        if self.rng.random() < 0.3:
            out.extend(self.pp())
        if self.rng.random() < 0.07:
            out.append(("/", "$_"))
        return out


VARIANTS = [("u", "v"), ("i", "y"), ("d", "dh"), ("t", "th"), ("e", "ee"),
            ("k", "ck"), ("s", "ss"), ("en", "et"), ("o", "oe"), ("a", "ae")]


def vary(rng, word, rate):
    if not word.isalpha() or rng.random() >= rate:
        return word
    src, dst = rng.choice(VARIANTS)
    positions = [i for i in range(len(word)) if word.startswith(src, i)]
    if not positions:
        return word
    i = rng.choice(positions)
    return word[:i] + dst + word[i + len(src):]


def generate(rng, lex, tokens, variation, noise, tags):
    grammar = Grammar(rng, lex)
    out = []
    while len(out) < tokens:
        out.extend(grammar.clause())
    out = out[:tokens]
    result = []
    for idx, (word, tag) in enumerate(out):
        if idx == 0:
            word = word[:1].upper() + word[1:]
        word = vary(rng, word, variation)
        if rng.random() < noise:
            tag = rng.choice(tags)
        result.append((word, tag))
    return result


DOCUMENTS = [
    ("bremen", 2600, 0.05),
    ("kolobrzeg", 3800, 0.08),
    ("duisburg", 4200, 0.14),
    ("bamberg", 4600, 0.06),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "corpus"))
    parser.add_argument("--seed", type=int, default=1297)
    parser.add_argument("--noise", type=float, default=0.01)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    lex = Lexicon(rng)
    tags = sorted(set(FUNCTION) | {"NA", "NE", "ADJA", "ADJD", "VVFIN", "VVINF", "VVPP", "$_"})
    os.makedirs(args.out, exist_ok=True)
    for name, tokens, variation in DOCUMENTS:
        doc = generate(rng, lex, tokens, variation, args.noise, tags)
        with open(os.path.join(args.out, name + ".tsv"), "w", encoding="utf-8") as f:
            for word, tag in doc:
                f.write(f"{word}\t{tag}\n")


if __name__ == "__main__":
    main()
