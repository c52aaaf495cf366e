#!/usr/bin/env python3
# Copyright 2026 The RuleForge Authors. All rights reserved.
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

"""Writes a small annotated English corpus built from templates.

Every token carries word, lemma, part-of-speech tag and entity type, and each
sentence a dependency tree. The output is deterministic for a given seed.
"""

import argparse
import json
import random

PERSONS = [
    ["John", "Smith"], ["Mary"], ["David", "Anderson"], ["Alice", "Brown"], ["Tom"],
    ["Sarah", "Miller"], ["James"], ["Emma", "Wilson"], ["Peter", "Jones"], ["Laura"],
    ["Michael", "Clark"], ["Anna"], ["Robert", "Lee"], ["Julia", "King"], ["Mark"],
]
ORGS = [
    ["Acme", "Corp"], ["Globex"], ["Initech"], ["Umbrella", "Inc"], ["Stark", "Industries"],
    ["Wayne", "Enterprises"], ["Hooli"], ["Vandelay", "Industries"],
]
LOCS = [["Paris"], ["London"], ["New", "York"], ["Berlin"], ["Tokyo"], ["Boston"],
        ["Rome"], ["Madrid"]]
YEARS = ["1990", "1998", "2004", "2010", "2015", "2021"]

# singular, plural
NOUNS = [("dog", "dogs"), ("cat", "cats"), ("car", "cars"), ("house", "houses"),
         ("book", "books"), ("bird", "birds"), ("man", "men"), ("woman", "women"),
         ("child", "children"), ("teacher", "teachers"), ("city", "cities"),
         ("letter", "letters"), ("horse", "horses"), ("student", "students")]
# lemma, past, 3sg present, gerund
INTRANS = [("bark", "barked", "barks", "barking"), ("run", "ran", "runs", "running"),
           ("sleep", "slept", "sleeps", "sleeping"), ("sing", "sang", "sings", "singing"),
           ("arrive", "arrived", "arrives", "arriving"), ("laugh", "laughed", "laughs", "laughing"),
           ("jump", "jumped", "jumps", "jumping"), ("wait", "waited", "waits", "waiting")]
TRANS = [("see", "saw", "sees"), ("buy", "bought", "buys"), ("write", "wrote", "writes"),
         ("find", "found", "finds"), ("like", "liked", "likes"), ("chase", "chased", "chases"),
         ("read", "read", "reads"), ("sell", "sold", "sells"), ("visit", "visited", "visits")]
ADJS = ["big", "small", "red", "old", "young", "happy", "quiet", "new", "brown", "tall"]
ADVS = ["loudly", "quickly", "slowly", "quietly", "again", "yesterday"]
DETS = [("the", "DT"), ("a", "DT"), ("this", "DT"), ("every", "DT")]
KIN = [("son", "sons"), ("daughter", "daughters"), ("brother", "brothers"),
       ("sister", "sisters"), ("friend", "friends")]
TITLES = ["CEO", "founder", "president", "director", "chairman"]


class Builder:
    def __init__(self):
        self.tokens = []
        self.deps = []

    def tok(self, word, lemma, tag, entity="O"):
        self.tokens.append({"word": word, "lemma": lemma, "tag": tag, "entity": entity})
        return len(self.tokens) - 1

    def dep(self, head, dependent, label):
        self.deps.append([head, dependent, label])

    def name(self, parts, entity):
        """Multi-token name; the last token is the head."""
        idx = [self.tok(p, p.lower(), "NNP", entity) for p in parts]
        for i in idx[:-1]:
            self.dep(idx[-1], i, "compound")
        return idx[-1]

    def punct(self, head, word="."):
        self.dep(head, self.tok(word, word, "." if word == "." else ","), "punct")


def noun_phrase(b, rng, plural=None, adjs=None):
    noun = rng.choice(NOUNS)
    if plural is None:
        plural = rng.random() < 0.3
    if adjs is None:
        r = rng.random()
        adjs = 0 if r < 0.5 else (1 if r < 0.8 else (2 if r < 0.95 else 3))
    det = None
    if not plural or rng.random() < 0.5:
        word, tag = rng.choice(DETS[:1] if plural else DETS)
        det = b.tok(word, word, tag)
    mods = [b.tok(a, a, "JJ") for a in rng.sample(ADJS, adjs)]
    head = b.tok(noun[1] if plural else noun[0], noun[0], "NNS" if plural else "NN")
    if det is not None:
        b.dep(head, det, "det")
    for m in mods:
        b.dep(head, m, "amod")
    return head, plural


def capitalize_first(b):
    first = b.tokens[0]
    if first["tag"] != "NNP":
        first["word"] = first["word"][0].upper() + first["word"][1:]


def t_intransitive(b, rng):
    subj, plural = noun_phrase(b, rng)
    v = rng.choice(INTRANS)
    if rng.random() < 0.6:
        verb = b.tok(v[1], v[0], "VBD")
    elif rng.random() < 0.5:
        verb = b.tok(v[0] if plural else v[2], v[0], "VBP" if plural else "VBZ")
    else:
        aux = b.tok("were" if plural else "was", "be", "VBD")
        verb = b.tok(v[3], v[0], "VBG")
        b.dep(verb, aux, "aux")
    b.dep(verb, subj, "nsubj")
    if rng.random() < 0.5:
        adv = rng.choice(ADVS)
        b.dep(verb, b.tok(adv, adv, "RB"), "advmod")
    b.punct(verb)
    return verb


def t_transitive(b, rng):
    subj, plural = noun_phrase(b, rng)
    v = rng.choice(TRANS)
    if rng.random() < 0.7:
        verb = b.tok(v[1], v[0], "VBD")
    else:
        verb = b.tok(v[0] if plural else v[2], v[0], "VBP" if plural else "VBZ")
    b.dep(verb, subj, "nsubj")
    obj, _ = noun_phrase(b, rng)
    b.dep(verb, obj, "obj")
    if rng.random() < 0.3:
        prep = b.tok("in", "in", "IN")
        place, _ = noun_phrase(b, rng, plural=False, adjs=0)
        b.dep(place, prep, "case")
        b.dep(verb, place, "obl")
    b.punct(verb)
    return verb


def t_kinship(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    cop_word = rng.choice(["was", "is"])
    cop = b.tok(cop_word, "be", "VBD" if cop_word == "was" else "VBZ")
    det = b.tok("a", "a", "DT")
    kin = rng.choice(KIN)
    head = b.tok(kin[0], kin[0], "NN")
    of = b.tok("of", "of", "IN")
    obj = b.name(rng.choice(PERSONS), "PERSON")
    for d, lab in ((subj, "nsubj"), (cop, "cop"), (det, "det"), (obj, "nmod")):
        b.dep(head, d, lab)
    b.dep(obj, of, "case")
    b.punct(head)
    return head


def t_works_for(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    form = rng.choice([("works", "VBZ"), ("worked", "VBD")])
    verb = b.tok(form[0], "work", form[1])
    prep = b.tok("for", "for", "IN")
    org = b.name(rng.choice(ORGS), "ORGANIZATION")
    b.dep(verb, subj, "nsubj")
    b.dep(org, prep, "case")
    b.dep(verb, org, "obl")
    b.punct(verb)
    return verb


def t_lives_in(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    lemma = rng.choice(["live", "stay"])
    form = rng.choice([(lemma + "s", "VBZ"), (lemma + "d" if lemma == "live" else lemma + "ed", "VBD")])
    verb = b.tok(form[0], lemma, form[1])
    prep = b.tok("in", "in", "IN")
    loc = b.name(rng.choice(LOCS), "LOCATION")
    b.dep(verb, subj, "nsubj")
    b.dep(loc, prep, "case")
    b.dep(verb, loc, "obl")
    b.punct(verb)
    return verb


def t_title(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    b.punct(subj, ",")
    det = b.tok("the", "the", "DT")
    title_word = rng.choice(TITLES)
    title = b.tok(title_word, title_word.lower(), "NN", "TITLE")
    of = b.tok("of", "of", "IN")
    org = b.name(rng.choice(ORGS), "ORGANIZATION")
    b.punct(subj, ",")
    verb = b.tok("said", "say", "VBD")
    b.dep(title, det, "det")
    b.dep(org, of, "case")
    b.dep(title, org, "nmod")
    b.dep(subj, title, "appos")
    b.dep(verb, subj, "nsubj")
    b.punct(verb)
    return verb


def t_married(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    verb = b.tok("married", "marry", "VBD")
    obj = b.name(rng.choice(PERSONS), "PERSON")
    b.dep(verb, subj, "nsubj")
    b.dep(verb, obj, "obj")
    if rng.random() < 0.5:
        prep = b.tok("in", "in", "IN")
        loc = b.name(rng.choice(LOCS), "LOCATION")
        b.dep(loc, prep, "case")
        b.dep(verb, loc, "obl")
    b.punct(verb)
    return verb


def t_based_in(b, rng):
    subj = b.name(rng.choice(ORGS), "ORGANIZATION")
    aux = b.tok("is", "be", "VBZ")
    verb = b.tok("based", "base", "VBN")
    prep = b.tok("in", "in", "IN")
    loc = b.name(rng.choice(LOCS), "LOCATION")
    b.dep(verb, subj, "nsubj:pass")
    b.dep(verb, aux, "aux:pass")
    b.dep(loc, prep, "case")
    b.dep(verb, loc, "obl")
    b.punct(verb)
    return verb


def t_born_in(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    aux = b.tok("was", "be", "VBD")
    verb = b.tok("born", "bear", "VBN")
    prep = b.tok("in", "in", "IN")
    loc = b.name(rng.choice(LOCS), "LOCATION")
    b.dep(verb, subj, "nsubj:pass")
    b.dep(verb, aux, "aux:pass")
    b.dep(loc, prep, "case")
    b.dep(verb, loc, "obl")
    if rng.random() < 0.5:
        prep2 = b.tok("in", "in", "IN")
        year = b.tok(rng.choice(YEARS), "year", "CD", "DATE")
        b.dep(year, prep2, "case")
        b.dep(verb, year, "obl")
    b.punct(verb)
    return verb


def t_founded(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    verb = b.tok("founded", "found", "VBD")
    org = b.name(rng.choice(ORGS), "ORGANIZATION")
    b.dep(verb, subj, "nsubj")
    b.dep(verb, org, "obj")
    if rng.random() < 0.6:
        prep = b.tok("in", "in", "IN")
        year = b.tok(rng.choice(YEARS), "year", "CD", "DATE")
        b.dep(year, prep, "case")
        b.dep(verb, year, "obl")
    b.punct(verb)
    return verb


def t_person_action(b, rng):
    subj = b.name(rng.choice(PERSONS), "PERSON")
    v = rng.choice(TRANS)
    verb = b.tok(v[1], v[0], "VBD")
    obj, _ = noun_phrase(b, rng)
    b.dep(verb, subj, "nsubj")
    b.dep(verb, obj, "obj")
    if rng.random() < 0.4:
        adv = rng.choice(ADVS)
        b.dep(verb, b.tok(adv, adv, "RB"), "advmod")
    b.punct(verb)
    return verb


TEMPLATES = [
    (t_intransitive, 4), (t_transitive, 4), (t_person_action, 2), (t_kinship, 1),
    (t_works_for, 1), (t_lives_in, 1), (t_title, 1), (t_married, 1), (t_based_in, 1),
    (t_born_in, 1), (t_founded, 1),
]


def make_sentence(rng):
    fns, weights = zip(*TEMPLATES)
    fn = rng.choices(fns, weights=weights)[0]
    b = Builder()
    root = fn(b, rng)
    capitalize_first(b)
    b.dep(-1, root, "root")
    deps = sorted(d for d in b.deps if d[0] >= 0)
    return b.tokens, deps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1800)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    with open(args.out, "w", encoding="utf-8") as f:
        for i in range(args.n):
            tokens, deps = make_sentence(rng)
            rec = {"id": "s%04d" % (i + 1), "tokens": tokens, "deps": deps}
            f.write(json.dumps(rec, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
