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

"""Writes the bundled fixtures: the parent-child example sentence with its
surface and dependency-path specifications, and few-shot relation
extraction episodes with a background set.

Relation mentions are masked: each entity mention becomes one token whose
word and lemma are its type. The token keeps the mention head's tag.
"""

import argparse
import json
import os
import random


def tok(word, lemma, tag, entity="O"):
    return {"word": word, "lemma": lemma, "tag": tag, "entity": entity}


def mask(entity, tag="NNP"):
    return tok(entity, entity.lower(), tag, entity)


def dump(path, obj):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def write_lines(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")


# ---------------------------------------------------------------------------
# Parent-child example

def son_of(out_dir):
    words = [("He", "he", "PRP", "PERSON"), ("was", "be", "VBD", "O"), ("a", "a", "DT", "O"),
             ("son", "son", "NN", "O"), ("of", "of", "IN", "O"),
             ("David", "david", "NNP", "PERSON"), ("and", "and", "CC", "O"),
             ("Mary", "mary", "NNP", "PERSON"), ("M", "m", "NNP", "PERSON"),
             ("Anderson", "anderson", "NNP", "PERSON"), (".", ".", ".", "O")]
    original = {
        "id": "fig1",
        "tokens": [tok(*w) for w in words],
        "deps": [[3, 0, "nsubj"], [3, 1, "cop"], [3, 2, "det"], [3, 9, "nmod:of"],
                 [3, 10, "punct"], [9, 4, "case"], [9, 5, "conj"], [9, 6, "cc"],
                 [9, 7, "compound"], [9, 8, "compound"]],
    }
    # "He" and "Mary M Anderson" replaced by their type.
    masked = {
        "id": "fig1-masked",
        "tokens": [mask("PERSON", "PRP")] + [tok(*w) for w in words[1:7]] +
                  [mask("PERSON", "NNP"), tok(".", ".", ".")],
        "deps": [[3, 0, "nsubj"], [3, 1, "cop"], [3, 2, "det"], [3, 7, "nmod:of"],
                 [3, 8, "punct"], [7, 4, "case"], [7, 5, "conj"], [7, 6, "cc"]],
    }
    write_lines(os.path.join(out_dir, "corpus.jsonl"), [original, masked])
    dump(os.path.join(out_dir, "spec_surface.json"),
         {"mode": "surface", "entries": [{"sentence": masked, "selections": [[0, 8]]}]})
    dump(os.path.join(out_dir, "spec_path.json"),
         {"mode": "path",
          "entries": [{"sentence": masked, "pair": {"subj": [0, 1], "obj": [7, 8]}}]})


# ---------------------------------------------------------------------------
# Few-shot episodes

# label -> (subject type, object type, middle tokens, index of the head among
# the middle tokens, dependency labels of subject and object)
RELATIONS = {
    "per:employee_of": ("PERSON", "ORGANIZATION", [("works", "work", "VBZ"), ("for", "for", "IN")], 0),
    "org:founded_by": ("ORGANIZATION", "PERSON", [("founder", "founder", "NN")], 0),
    "per:city_of_residence": ("PERSON", "LOCATION", [("lives", "live", "VBZ"), ("in", "in", "IN")], 0),
    "per:spouse": ("PERSON", "PERSON", [("married", "marry", "VBD")], 0),
    "per:children": ("PERSON", "PERSON", [("fathered", "father", "VBD")], 0),
    "per:siblings": ("PERSON", "PERSON", [("brother", "brother", "NN"), ("of", "of", "IN")], 0),
    "org:city_of_headquarters": ("ORGANIZATION", "LOCATION",
                                 [("headquartered", "headquarter", "VBN"), ("in", "in", "IN")], 0),
    "per:city_of_birth": ("PERSON", "LOCATION", [("born", "bear", "VBN"), ("in", "in", "IN")], 0),
}

# Same type pairs as the relations, but no relation between the entities.
UNRELATED = [
    ("PERSON", "PERSON", [("met", "meet", "VBD")], 0),
    ("PERSON", "LOCATION", [("visited", "visit", "VBD")], 0),
    ("PERSON", "ORGANIZATION", [("sued", "sue", "VBD")], 0),
    ("ORGANIZATION", "LOCATION", [("left", "leave", "VBD")], 0),
]
# Type pairs no relation uses.
MISMATCHED = [
    ("LOCATION", "LOCATION", [("near", "near", "IN")], 0),
    ("ORGANIZATION", "ORGANIZATION", [("bought", "buy", "VBD")], 0),
    ("DATE", "LOCATION", [("in", "in", "IN")], 0),
]

# Every mention has some leading context.
PREFIXES = [[("Reports", "report", "NNS"), ("say", "say", "VBP")],
            [("In", "in", "IN"), ("2010", "2010", "CD", "DATE"), (",", ",", ",")],
            [("Officials", "official", "NNS"), ("said", "say", "VBD"), ("that", "that", "IN")],
            [("Meanwhile", "meanwhile", "RB"), (",", ",", ",")]]
SUFFIXES = [[(".", ".", ".")], [("last", "last", "JJ"), ("year", "year", "NN"), (".", ".", ".")],
            [(",", ",", ","), ("sources", "source", "NNS"), ("said", "say", "VBD"),
             (".", ".", ".")],
            [("again", "again", "RB"), (".", ".", ".")]]

_counter = [0]


def mention(rng, pattern, gold):
    subj_type, obj_type, middle, head = pattern
    prefix = rng.choice(PREFIXES)
    suffix = rng.choice(SUFFIXES)
    tokens = [tok(*p) for p in prefix]
    subj = len(tokens)
    tokens.append(mask(subj_type))
    mid0 = len(tokens)
    tokens += [tok(*m) for m in middle]
    obj = len(tokens)
    tokens.append(mask(obj_type))
    tokens += [tok(*s) for s in suffix]
    root = mid0 + head
    deps = [[root, subj, "nsubj"], [root, obj, "obl" if head + 1 < len(middle) else "obj"]]
    for i in range(mid0, obj):
        if i == root:
            continue
        deps.append([obj, i, "case"] if i > root else [root, i, "aux"])
    for i in range(0, subj):
        deps.append([root, i, "dep"])
    for i in range(obj + 1, len(tokens)):
        deps.append([root, i, "punct" if tokens[i]["tag"] in (".", ",") else "dep"])
    _counter[0] += 1
    sentence = {"id": "fs%05d" % _counter[0], "tokens": tokens, "deps": sorted(deps)}
    return {"sentence": sentence, "subj": [subj, subj + 1], "subjType": subj_type,
            "obj": [obj, obj + 1], "objType": obj_type, "gold": gold}


def episode(rng, way, shot):
    labels = sorted(rng.sample(sorted(RELATIONS), way))
    support = {l: [mention(rng, RELATIONS[l], l) for _ in range(shot)] for l in labels}
    queries = [mention(rng, RELATIONS[l], l) for l in labels]
    queries.append(mention(rng, rng.choice(MISMATCHED), "no_relation"))
    queries.append(mention(rng, rng.choice(UNRELATED), "no_relation"))
    rng.shuffle(queries)
    return {"wayCount": way, "shotCount": shot, "support": support, "queries": queries}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data")
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--episodes", type=int, default=20)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    os.makedirs(os.path.join(args.out, "son_of"), exist_ok=True)
    os.makedirs(os.path.join(args.out, "fewshot"), exist_ok=True)
    son_of(os.path.join(args.out, "son_of"))
    for shot in (1, 5):
        write_lines(os.path.join(args.out, "fewshot", "episodes_5way%dshot.jsonl" % shot),
                    [episode(rng, 5, shot) for _ in range(args.episodes)])
    background = [mention(rng, rng.choice(UNRELATED), "no_relation") for _ in range(40)]
    write_lines(os.path.join(args.out, "fewshot", "background.jsonl"), background)


if __name__ == "__main__":
    main()
