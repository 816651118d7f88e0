"""Regenerates the bundled fixture suites under fixtures/.

Every gold answer is computed here by direct simulation (family trees, swap
replay, permutation search, table filtering, hop lookup, naive rule closure),
independently of the C++ strategies it is later checked against.

    python3 tools/fixtures/gen_fixtures.py [--out fixtures]
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
from pathlib import Path

import kinship_sim as kin

LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
ORDINALS = ["first", "second", "third", "fourth", "fifth", "sixth", "seventh"]
NUMBER_WORDS = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"]


def write_json(path: Path, value) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(value, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def histogram(buckets, scheme) -> dict:
    return {b: sum(1 for x in buckets if x == b) for b in scheme if b in buckets}


def manifest(name, fmt, file, buckets, scheme, **extra) -> dict:
    out = {"name": name, "format": fmt, "file": file}
    out.update(extra)
    out["histogram"] = histogram(buckets, scheme)
    return out


def options_block(texts) -> str:
    return "Options:\n" + "\n".join(f"({LETTERS[i]}) {t}" for i, t in enumerate(texts))


# ---------------------------------------------------------------------------
# Relation prediction


def sentence(rng: random.Random, subject: str, relation: str, obj: str) -> str:
    forms = [
        "[{s}]'s {r} is [{o}].",
        "[{s}] has a {r} named [{o}].",
        "[{o}] is the {r} of [{s}].",
    ]
    return rng.choice(forms).format(s=subject, r=relation, o=obj)


def clutrr_row(rng: random.Random, chain, row_id: str):
    """A story stating only the chain's edges; the last edge always points
    forward so the target's gender is stated."""
    facts, sentences = [], []
    for i, (prev, nxt) in enumerate(zip(chain, chain[1:])):
        hop = kin.relation_kind(prev, nxt)
        flip = i < len(chain) - 2 and rng.random() < 0.4
        if flip:
            fact = [nxt.name, kin.label(kin.relation_kind(nxt, prev), prev.male), prev.name]
        else:
            fact = [prev.name, kin.label(hop, nxt.male), nxt.name]
        facts.append(fact)
        sentences.append(sentence(rng, *fact))
    a, b = chain[0], chain[-1]
    target = kin.label(kin.relation_kind(a, b), b.male)
    return {
        "id": row_id,
        "story": " ".join(sentences),
        "query": str((a.name, b.name)),
        "target": target,
        "task_name": f"task_1.{len(chain) - 1}",
        "facts": json.dumps(facts),
    }


# The three family stories used as worked examples, restated as edges.
CLUTRR_CASES = [
    {
        "id": "case-seth-jeremy",
        "facts": [["Christian", "son", "Seth"], ["Christian", "brother", "Jonathan"], ["Jonathan", "sister", "Ruth"],
                  ["Ruth", "daughter", "Stephanie"], ["Stephanie", "brother", "Jeremy"]],
        "query": ("Jeremy", "Seth"),
        "target": "cousin",
    },
    {
        "id": "case-laura-jonathan",
        "facts": [["Seth", "wife", "Laura"], ["Seth", "daughter", "Rosa"], ["Rosa", "brother", "Jason"],
                  ["Jonathan", "brother", "Christian"], ["Christian", "brother", "Jason"]],
        "query": ("Jonathan", "Laura"),
        "target": "mother",
    },
    {
        "id": "case-stephanie-stephen",
        "facts": [["Christian", "sister", "Ruth"], ["Christian", "father", "Seth"], ["Ruth", "daughter", "Stephanie"],
                  ["Christian", "brother", "Stephen"]],
        "query": ("Stephen", "Stephanie"),
        "target": "niece",
        "hops": 3,
    },
]


def case_row(rng: random.Random, case) -> dict:
    return {
        "id": case["id"],
        "story": " ".join(sentence(rng, *f) for f in case["facts"]),
        "query": str(case["query"]),
        "target": case["target"],
        "task_name": f"task_1.{case.get('hops', len(case['facts']))}",
        "facts": json.dumps(case["facts"]),
    }


def write_clutrr(out: Path, rng: random.Random, table) -> list:
    rows = [case_row(rng, c) for c in CLUTRR_CASES]
    per_bucket = {h: 3 for h in range(3, 11)}
    for c in CLUTRR_CASES:
        per_bucket[int(c.get("hops", len(c["facts"])))] -= 1
    chains_by_hop = {}
    for hops in range(3, 11):
        found = []
        while len(found) < max(per_bucket[hops], 1):
            people = kin.build_tree(rng)
            chain = kin.chains(rng.choice(people), hops, table, rng)
            if chain:
                found.append(chain)
        chains_by_hop[hops] = found
        for i, chain in enumerate(found[: per_bucket[hops]]):
            rows.append(clutrr_row(rng, chain, f"clutrr-h{hops}-{i}"))
    # One gold spelled through the alias table.
    for r in rows:
        if r["target"] == "grandson":
            r["target"] = "grand son"
            break
    # A row outside the 3..10 scheme, skipped by the loader.
    rows.append({"id": "clutrr-h2-skip", "story": "[Hazel]'s son is [Brian]. [Brian]'s sister is [Nora].",
                 "query": str(("Hazel", "Nora")), "target": "daughter", "task_name": "task_1.2",
                 "facts": json.dumps([["Hazel", "son", "Brian"], ["Brian", "sister", "Nora"]])})
    columns = ["id", "story", "query", "target", "task_name", "facts"]
    write_csv(out / "clutrr" / "clutrr.csv", columns, rows)
    kept = [r for r in rows if 3 <= int(r["task_name"].split(".")[1]) <= 10]
    scheme = [str(h) for h in range(3, 11)]
    aliases = {"grandson": ["grand son"], "granddaughter": ["grand daughter"],
               "father-in-law": ["father in law"], "mother-in-law": ["mother in law"]}
    write_json(out / "clutrr" / "aliases.json", aliases)
    write_json(out / "clutrr" / "manifest.json",
               manifest("clutrr", "clutrr", "clutrr.csv", [r["task_name"].split(".")[1] for r in kept], scheme,
                        aliases="aliases.json"))

    desk = []
    for hops in range(3, 11):
        desk.append(clutrr_row(rng, chains_by_hop[hops][0], f"desk-h{hops}"))
    write_csv(out / "clutrr-desk" / "clutrr.csv", columns, desk)
    write_json(out / "clutrr-desk" / "manifest.json",
               manifest("clutrr-desk", "clutrr", "clutrr.csv", [str(h) for h in range(3, 11)], scheme))
    return rows


def write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r[c] for c in columns})
    path.write_text(buf.getvalue(), encoding="utf-8")


# ---------------------------------------------------------------------------
# Dynamic entity prediction (tracking shuffled objects)

PEOPLE = ["Alice", "Bob", "Claire", "Dave", "Eve", "Fred", "Gertrude"]

SHUFFLE_THEMES = {
    "books": {
        "intro": "{names} are friends and avid readers who occasionally trade books. At the start of the semester, "
                 "they each buy one new book: {holdings}.",
        "holding": "{p} gets {x}",
        "middle": "As the semester proceeds, they start trading around the new books.",
        "swap": "{a} and {b} swap books",
        "ending": "At the end of the semester, {q} has",
        "relation": "has book",
        "items": ["Hound of the Baskervilles", "The Pearl", "The Odyssey", "Moby Dick", "Frankenstein",
                  "Ulysses", "Catch-22", "Lolita", "The Fellowship of the Ring"],
    },
    "dancers": {
        "intro": "{names} are dancers at a square dance. At the start of a song, they each have a partner: "
                 "{holdings}.",
        "holding": "{p} is dancing with {x}",
        "middle": "Throughout the song, the dancers often trade partners.",
        "swap": "{a} and {b} switch partners",
        "ending": "At the end of the dance, {q} is dancing with",
        "relation": "is dancing with",
        "items": ["Rodrigo", "Jamie", "Lola", "Patrick", "Sam", "Izzi", "Karl", "Melissa", "Ophelia"],
    },
    "gifts": {
        "intro": "{names} are holding a white elephant gift exchange. At the start of the event, they are each "
                 "holding a present of a different color: {holdings}.",
        "holding": "{p} has a {x}",
        "middle": "As the event progresses, pairs of people swap gifts.",
        "swap": "{a} and {b} swap their gifts",
        "ending": "At the end of the event, {q} has the",
        "relation": "has",
        "items": ["yellow present", "brown present", "blue present", "red present", "green present",
                  "white present", "pink ball", "black ball", "orange ball"],
    },
    "balls": {
        "intro": "{names} are playing a game. At the start of the game, they are each holding a ball: {holdings}.",
        "holding": "{p} has a {x}",
        "middle": "As the game progresses, pairs of players trade balls.",
        "swap": "{a} and {b} swap balls",
        "ending": "At the end of the game, {q} has the",
        "relation": "has ball",
        "items": ["pink ball", "white ball", "red ball", "purple ball", "green ball", "yellow ball",
                  "black ball", "orange ball", "blue ball"],
    },
    "soccer": {
        "intro": "{names} are on the same team in a soccer match. At the start of the match, they are each "
                 "assigned to a position: {holdings}.",
        "holding": "{p} is playing {x}",
        "middle": "As the game progresses, pairs of players occasionally swap positions.",
        "swap": "{a} and {b} trade positions",
        "ending": "At the end of the match, {q} is playing",
        "relation": "is playing",
        "items": ["goalkeeper", "left winger", "right winger", "striker", "center midfielder", "cheerleader",
                  "benchwarmer", "left midfielder", "fullback"],
    },
}

SHUFFLE_CASES = [
    ("case-books", "books", ["Hound of the Baskervilles", "The Pearl", "The Odyssey"],
     [("Bob", "Claire"), ("Claire", "Alice"), ("Bob", "Alice")], "Alice"),
    ("case-dancers", "dancers", ["Rodrigo", "Jamie", "Lola"],
     [("Claire", "Alice"), ("Bob", "Claire"), ("Claire", "Alice")], "Alice"),
    ("case-gifts", "gifts", ["yellow present", "brown present", "blue present"],
     [("Bob", "Alice"), ("Claire", "Alice"), ("Bob", "Alice")], "Bob"),
]


def join_names(names) -> str:
    return ", ".join(names[:-1]) + ", and " + names[-1]


def shuffle_example(ex_id, theme_name, items, swaps, queried):
    theme = SHUFFLE_THEMES[theme_name]
    people = PEOPLE[: len(items)]
    holdings = join_names([theme["holding"].format(p=p, x=x) for p, x in zip(people, items)])
    steps = []
    for i, (a, b) in enumerate(swaps):
        lead = "First" if i == 0 else ("Finally" if i == len(swaps) - 1 else "Then")
        steps.append(f"{lead}, {theme['swap'].format(a=a, b=b)}.")
    story = " ".join([theme["intro"].format(names=join_names(people), holdings=holdings), theme["middle"],
                      *steps, theme["ending"].format(q=queried)])
    state = dict(zip(people, items))
    for a, b in swaps:
        state[a], state[b] = state[b], state[a]
    answer = state[queried]
    rel = theme["relation"]
    return {
        "id": ex_id,
        "input": story + "\n" + options_block(items),
        "target": f"({LETTERS[items.index(answer)]})",
        "structured": {
            "initial": [[p, rel, x] for p, x in zip(people, items)],
            "functional": [rel],
            "events": [f"swap({a}, {b}, {rel})" for a, b in swaps],
            "query": [queried, rel],
        },
    }


def write_shuffled(out: Path, rng: random.Random) -> None:
    words = {3: "three", 5: "five", 7: "seven"}
    for n, count in ((3, 12), (5, 10), (7, 10)):
        examples = []
        if n == 3:
            examples += [shuffle_example(*c) for c in SHUFFLE_CASES]
        themes = list(SHUFFLE_THEMES)
        while len(examples) < count:
            theme = themes[len(examples) % len(themes)]
            items = rng.sample(SHUFFLE_THEMES[theme]["items"], n)
            people = PEOPLE[:n]
            swaps = [tuple(rng.sample(people, 2)) for _ in range(n)]
            examples.append(shuffle_example(f"shuffled{n}-{len(examples)}", theme, items, swaps,
                                            rng.choice(people)))
        subtask = f"tracking_shuffled_objects_{words[n]}_objects"
        name = f"bbh-shuffled{n}"
        write_json(out / name / "task.json", {"examples": examples})
        write_json(out / name / "manifest.json",
                   manifest(name, "bbh", "task.json", [str(n)] * len(examples), ["3", "5", "7"], subtask=subtask))


# ---------------------------------------------------------------------------
# Graph sorting (logical deduction)

SORT_THEMES = {
    "birds": {
        "intro": "On a branch, there are {n} birds: {objs}.",
        "article": "a ",
        "objects": ["falcon", "owl", "raven", "hawk", "crow", "robin", "quail", "hummingbird", "cardinal"],
        "left_of": "The {a} is to the left of the {b}.",
        "right_of": "The {a} is to the right of the {b}.",
        "leftmost": "The {a} is the leftmost.",
        "rightmost": "The {a} is the rightmost.",
        "at_left": "The {a} is the {k} from the left.",
        "at_right": "The {a} is the {k} from the right.",
        "option": "The {a} is the {k} from the left",
        "option_right": None,
    },
    "books": {
        "intro": "On a shelf, there are {n} books: {objs}.",
        "article": "a ",
        "objects": ["red book", "green book", "blue book", "white book", "black book", "orange book",
                    "purple book", "gray book", "brown book"],
        "left_of": "The {a} is to the left of the {b}.",
        "right_of": "The {a} is to the right of the {b}.",
        "leftmost": "The {a} is the leftmost.",
        "rightmost": "The {a} is the rightmost.",
        "at_left": "The {a} is the {k} from the left.",
        "at_right": "The {a} is the {k} from the right.",
        "option": "The {a} is the {k} from the left",
        "option_right": None,
    },
    "fruits": {
        # Left to right runs from cheapest to most expensive.
        "intro": "A fruit stand sells {n} fruits: {objs}.",
        "article": "",
        "objects": ["peaches", "pears", "mangoes", "apples", "plums", "kiwis", "oranges", "loquats",
                    "watermelons"],
        "left_of": "The {a} are less expensive than the {b}.",
        "right_of": "The {a} are more expensive than the {b}.",
        "leftmost": "The {a} are the cheapest.",
        "rightmost": "The {a} are the most expensive.",
        "at_left": "The {a} are the {k}-cheapest.",
        "at_right": "The {a} are the {k}-most expensive.",
        "option": "The {a} are the {k}-cheapest",
        "option_right": "The {a} are the {k}-most expensive",
    },
}


def count_orders(objects, constraints) -> list:
    sols = []
    for perm in itertools.permutations(objects):
        pos = {o: i for i, o in enumerate(perm)}
        ok = True
        for kind, a, b in constraints:
            if kind == "left_of" and not pos[a] < pos[b]:
                ok = False
            elif kind == "right_of" and not pos[a] > pos[b]:
                ok = False
            elif kind == "leftmost" and pos[a] != 0:
                ok = False
            elif kind == "rightmost" and pos[a] != len(perm) - 1:
                ok = False
            elif kind == "at" and pos[a] != b:
                ok = False
            if not ok:
                break
        if ok:
            sols.append(perm)
    return sols


def constraint_text(theme, kind, a, b, n) -> str:
    if kind == "at":
        if b >= n // 2 + 1 and b != n - 1:
            return theme["at_right"].format(a=a, k=ORDINALS[n - 1 - b])
        return theme["at_left"].format(a=a, k=ORDINALS[b])
    if kind in ("left_of", "right_of"):
        return theme[kind].format(a=a, b=b)
    return theme[kind].format(a=a)


def constraint_struct(kind, a, b) -> str:
    if kind in ("left_of", "right_of"):
        return f"{kind}({a}, {b})"
    if kind == "at":
        return f"at({a}, {b})"
    return f"{kind}({a})"


def deduction_example(ex_id, theme_name, objects, constraints, position, rng=None):
    theme = SORT_THEMES[theme_name]
    n = len(objects)
    sols = count_orders(objects, constraints)
    assert len(sols) == 1, (ex_id, sols)
    order = sols[0]
    answer = order[position]
    objs = join_names([theme["article"] + o for o in objects])
    counts = {3: "three", 5: "five", 7: "seven"}
    story = ("The following paragraphs each describe a set of {w} objects arranged in a fixed order. The statements "
             "are logically consistent within each paragraph. ").format(w=counts[n])
    story += theme["intro"].format(n=counts[n], objs=objs) + " "
    story += " ".join(constraint_text(theme, k, a, b, n) for k, a, b in constraints)
    if theme["option_right"] and position >= n // 2 + 1:
        opts = [theme["option_right"].format(a=o, k=ORDINALS[n - 1 - position]) for o in objects]
    else:
        opts = [theme["option"].format(a=o, k=ORDINALS[position]) for o in objects]
    opts = [o.replace("first-most expensive", "most expensive").replace("first-cheapest", "cheapest")
            for o in opts]
    return {
        "id": ex_id,
        "input": story + "\n" + options_block(opts),
        "target": f"({LETTERS[objects.index(answer)]})",
        "structured": {
            "objects": list(objects),
            "constraints": [constraint_struct(k, a, b) for k, a, b in constraints],
            "position": position,
        },
    }


DEDUCTION_CASES = [
    ("case-birds", "birds", ["falcon", "owl", "raven"], [("left_of", "raven", "owl"), ("leftmost", "falcon", None)], 1),
    ("case-fruits", "fruits", ["peaches", "pears", "mangoes"],
     [("left_of", "mangoes", "pears"), ("leftmost", "peaches", None)], 1),
]


def random_constraints(rng: random.Random, objects):
    order = objects[:]
    rng.shuffle(order)
    n = len(order)
    pos = {o: i for i, o in enumerate(order)}
    pool = []
    for a, b in itertools.permutations(objects, 2):
        if pos[a] < pos[b]:
            pool.append(("left_of", a, b))
        else:
            pool.append(("right_of", a, b))
    pool += [("leftmost", order[0], None), ("rightmost", order[-1], None)]
    pool += [("at", o, pos[o]) for o in objects if 0 < pos[o] < n - 1]
    rng.shuffle(pool)
    chosen = []
    for c in pool:
        chosen.append(c)
        if len(count_orders(objects, chosen)) == 1:
            break
    for c in list(chosen):
        rest = [x for x in chosen if x != c]
        if rest and len(count_orders(objects, rest)) == 1:
            chosen = rest
    return chosen


def write_deduction(out: Path, rng: random.Random) -> None:
    words = {3: "three", 5: "five", 7: "seven"}
    for n, count in ((3, 12), (5, 10), (7, 10)):
        examples = []
        if n == 3:
            examples += [deduction_example(*c) for c in DEDUCTION_CASES]
        themes = list(SORT_THEMES)
        while len(examples) < count:
            theme = themes[len(examples) % len(themes)]
            objects = rng.sample(SORT_THEMES[theme]["objects"], n)
            constraints = random_constraints(rng, objects)
            examples.append(deduction_example(f"deduction{n}-{len(examples)}", theme, objects, constraints,
                                              rng.randrange(n)))
        name = f"bbh-deduction{n}"
        write_json(out / name / "task.json", {"examples": examples})
        write_json(out / name / "manifest.json",
                   manifest(name, "bbh", "task.json", [str(n)] * len(examples), ["3", "5", "7"],
                            subtask=f"logical_deduction_{words[n]}_objects"))


# ---------------------------------------------------------------------------
# Graph query (penguins in a table, reasoning about colored objects)

PENGUINS = [("Louis", 7, 50, 11), ("Bernard", 5, 80, 13), ("Vincent", 9, 60, 11), ("Gwen", 8, 70, 15)]
JAMES = ("James", 12, 90, 12)
COLUMNS = ("name", "age", "height", "weight")


def penguin_story(rows) -> str:
    text = ("Here is a table where the first line is a header and each subsequent line is a penguin:  "
            "name, age, height (cm), weight (kg) ")
    text += " ".join(f"{r[0]}, {r[1]}, {r[2]}, {r[3]}" for r in PENGUINS)
    text += "  For example: the age of Louis is 7, the weight of Gwen is 15 kg, the height of Bernard is 80 cm."
    if len(rows) > len(PENGUINS):
        text += "  We now add a penguin to the table: " + ", ".join(str(x) for x in JAMES) + "."
    return text


def penguin_table(rows) -> str:
    return "name, age, height (cm), weight (kg)\n" + "".join(f"{r[0]}, {r[1]}, {r[2]}, {r[3]}\n" for r in rows)


OPS = {">": lambda x, y: x > y, "<": lambda x, y: x < y, ">=": lambda x, y: x >= y, "<=": lambda x, y: x <= y,
       "=": lambda x, y: x == y, "!=": lambda x, y: x != y}


def penguin_answer(rows, where, projection):
    def holds(row, cond):
        for op in (">=", "<=", "!=", ">", "<", "="):
            if op in cond:
                attr, value = cond.split(op)
                cell = row[COLUMNS.index(attr.strip())]
                return OPS[op](cell, type(cell)(value.strip()))
        raise ValueError(cond)

    matches = [r for r in rows if all(holds(r, c) for c in where)]
    if projection == "count":
        return len(matches)
    kind, attr = projection.split(":")
    ranked = sorted(matches, key=lambda r: r[COLUMNS.index(attr)])
    return (ranked[-1] if kind == "last" else ranked[0])[0]


PENGUIN_QUESTIONS = [
    ("case-penguins-count", "How many penguins are more than 5 years old?", ["age>5"], "count", False),
    ("case-penguins-filter", "How many penguins are less than 8 years old and weight more than 12 kg?",
     ["age<8", "weight>12"], "count", False),
    ("case-penguins-last", "What is the name of the last penguin sorted by alphabetic order?", [], "last:name",
     True),
    ("penguins-3", "How many penguins are more than 60 cm tall?", ["height>60"], "count", False),
    ("penguins-4", "What is the name of the first penguin sorted by alphabetic order?", [], "first:name", False),
    ("penguins-5", "Which penguin is the oldest?", [], "last:age", False),
    ("penguins-6", "Which penguin is the youngest?", [], "first:age", True),
    ("penguins-7", "Which penguin is the heaviest?", [], "last:weight", False),
    ("penguins-8", "How many penguins weigh less than 12 kg?", ["weight<12"], "count", False),
    ("penguins-9", "What is the name of the tallest penguin?", [], "last:height", True),
    ("penguins-10", "How many penguins are more than 5 years old?", ["age>5"], "count", True),
    ("penguins-11", "Which penguin is the shortest?", [], "first:height", False),
]


def write_penguins(out: Path) -> None:
    examples = []
    for ex_id, question, where, projection, with_james in PENGUIN_QUESTIONS:
        rows = PENGUINS + ([JAMES] if with_james else [])
        answer = penguin_answer(rows, where, projection)
        if projection == "count":
            opts = ["1", "2", "3", "4", "5"]
            target = opts.index(str(answer))
        else:
            opts = [r[0] for r in PENGUINS] + ["James"]
            target = opts.index(answer)
        examples.append({
            "id": ex_id,
            "input": penguin_story(rows) + "  " + question + "\n" + options_block(opts),
            "target": f"({LETTERS[target]})",
            "structured": {"table": penguin_table(rows), "class": "penguin", "where": where,
                           "projection": projection},
        })
    write_json(out / "bbh-penguins" / "task.json", {"examples": examples})
    write_json(out / "bbh-penguins" / "manifest.json",
               manifest("bbh-penguins", "bbh", "task.json", ["penguins_in_a_table"] * len(examples),
                        ["penguins_in_a_table", "reasoning_about_colored_objects"], subtask="penguins_in_a_table"))


COLORS = ["red", "orange", "yellow", "green", "blue", "purple", "pink", "brown", "black", "grey", "silver", "gold"]
THINGS = ["pen", "cup", "keychain", "notebook", "mug", "phone charger", "jug", "pencil", "stress ball",
          "fidget spinner", "booklet", "sheet of paper", "teddy bear", "dog leash", "envelope", "bracelet", "crayon"]
PLACES = ["On the desk", "On the table", "On the floor", "On the nightstand"]


def write_colored(out: Path, rng: random.Random) -> None:
    examples = []
    for i in range(10):
        k = rng.randint(4, 7)
        things = rng.sample(THINGS, k)
        palette = rng.sample(COLORS, 3)
        colors = [rng.choice(palette) for _ in things]
        target_color = rng.choice(colors)
        style = i % 3
        if style == 0:
            question, where = f"How many {target_color} items do you see?", [f"color={target_color}"]
        elif style == 1:
            question, where = f"How many non-{target_color} items do you see?", [f"color!={target_color}"]
        else:
            other = rng.choice([c for c in palette if c != target_color])
            question = f"How many items are neither {target_color} nor {other}?"
            where = [f"color!={target_color}", f"color!={other}"]
        count = sum(1 for c in colors if all(OPS["!=" if "!=" in w else "="](c, w.split("=")[-1])
                                            for w in where))
        listing = join_names([f"a {c} {t}" for c, t in zip(colors, things)])
        story = f"{rng.choice(PLACES)}, you see the following items arranged in a row: {listing}. {question}"
        opts = NUMBER_WORDS[:8]
        examples.append({
            "id": f"colored-{i}",
            "input": story + "\n" + options_block(opts),
            "target": f"({LETTERS[count]})",
            "structured": {"facts": [[t, "color", c] for t, c in zip(things, colors)], "where": where,
                           "projection": "count"},
        })
    write_json(out / "bbh-colored" / "task.json", {"examples": examples})
    write_json(out / "bbh-colored" / "manifest.json",
               manifest("bbh-colored", "bbh", "task.json", ["reasoning_about_colored_objects"] * len(examples),
                        ["penguins_in_a_table", "reasoning_about_colored_objects"],
                        subtask="reasoning_about_colored_objects"))


# ---------------------------------------------------------------------------
# Complex entity prediction (bridging questions)

# Fictional worlds: (paragraph facts, chain, question). Each fact becomes a
# sentence in the paragraph titled by its subject.
BRIDGE_WORLDS = [
    {
        "facts": [("The Salt Orchard", "is directed by", "Mirela Vosk"), ("Mirela Vosk", "was born in", "Tarnfield"),
                  ("Tarnfield", "is located in", "Eastmarch")],
        "anchor": "The Salt Orchard", "hops": ["is directed by", "was born in"],
        "question": "In which town was the director of The Salt Orchard born?",
    },
    {
        "facts": [("Glass Harbour", "was recorded by", "The Lantern Coast"), ("The Lantern Coast", "was formed in",
                  "Dunmore Bay"), ("Dunmore Bay", "is a port in", "Veldria")],
        "anchor": "Glass Harbour", "hops": ["was recorded by", "was formed in", "is a port in"],
        "question": "Which country is home to the port where the band that recorded Glass Harbour was formed?",
    },
    {
        "facts": [("Quillstone Quarterly", "is published by", "Brackwater Press"),
                  ("Brackwater Press", "was founded by", "Odile Marchetti"),
                  ("Odile Marchetti", "studied at", "Carrow College")],
        "anchor": "Quillstone Quarterly", "hops": ["is published by", "was founded by"],
        "question": "Who founded the publisher of Quillstone Quarterly?",
    },
    {
        "facts": [("Pellam Row", "is headquartered in", "Ostrava Falls"), ("Kestrel Outfitters",
                  "is headquartered in", "Lindqvist"), ("Kestrel Outfitters", "was founded by", "Ansel Dray")],
        "anchor": "Lindqvist", "hops": ["~is headquartered in", "was founded by"],
        "question": "Who founded the outfitter headquartered in Lindqvist?",
    },
    {
        "facts": [("Harrowgate Rovers", "play home games at", "Millbeck Park"),
                  ("Millbeck Park", "was designed by", "Tomasz Reyl"), ("Tomasz Reyl", "was born in", "Vireo")],
        "anchor": "Harrowgate Rovers", "hops": ["play home games at", "was designed by", "was born in"],
        "question": "Where was the architect of the stadium used by Harrowgate Rovers born?",
    },
    {
        "facts": [("The Ember Cycle", "was written by", "Lysander Coyle"),
                  ("Lysander Coyle", "is married to", "Petra Hollins"), ("Petra Hollins", "works as", "cartographer")],
        "anchor": "The Ember Cycle", "hops": ["was written by", "is married to"],
        "question": "Who is the spouse of the author of The Ember Cycle?",
    },
    {
        "facts": [("Sorrel Vale", "is the capital of", "Kinloch Province"),
                  ("Kinloch Province", "borders", "Amberlea"), ("Sorrel Vale", "has a population of", "84,000")],
        "anchor": "Kinloch Province", "hops": ["~is the capital of", "has a population of"],
        "question": "What is the population of the capital of Kinloch Province?",
    },
    {
        "facts": [("Tidewright", "is a ferry operated by", "Northline Shipping"),
                  ("Northline Shipping", "is a subsidiary of", "Calder Group"),
                  ("Calder Group", "is headquartered in", "Port Essel")],
        "anchor": "Tidewright", "hops": ["is a ferry operated by", "is a subsidiary of", "is headquartered in"],
        "question": "Where is the parent company of the operator of the Tidewright ferry headquartered?",
    },
    {
        "facts": [("Iris Fenwick", "coached", "Wexley United"), ("Wexley United", "won the", "1994 Marden Cup"),
                  ("Iris Fenwick", "was born in", "Galloway Heath")],
        "anchor": "1994 Marden Cup", "hops": ["~won the", "~coached"],
        "question": "Who coached the team that won the 1994 Marden Cup?",
    },
    {
        "facts": [("Copperleaf", "is a restaurant owned by", "Janek Ostrowski"),
                  ("Janek Ostrowski", "trained under", "Hélène Marchal"),
                  ("Hélène Marchal", "runs", "Maison Verdier")],
        "anchor": "Copperleaf", "hops": ["is a restaurant owned by", "trained under", "runs"],
        "question": "Which restaurant is run by the mentor of Copperleaf's owner?",
    },
    {
        "facts": [("Lush Ltd.", "is headquartered in", "Poole, Dorset, United Kingdom"),
                  ("Lush Ltd.", "is a", "cosmetics retailer"), ("Lush Ltd.", "has a store in", "ABQ Uptown"),
                  ("The Lighthouse", "is located in", "Poole, Dorset, United Kingdom")],
        "anchor": "ABQ Uptown", "hops": ["~has a store in"],
        "question": "What retailer in ABQ Uptown is headquartered in Poole, Dorset, United Kingdom?",
        "answer": "Lush",
    },
    {
        "facts": [("Orla Brennock", "painted", "Harvest at Keel"), ("Harvest at Keel", "hangs in",
                  "Rathmore Gallery"), ("Rathmore Gallery", "is located in", "Kilbride")],
        "anchor": "Orla Brennock", "hops": ["painted", "hangs in", "is located in"],
        "question": "In which town is the gallery that holds the painting by Orla Brennock?",
    },
]


def follow(facts, anchor, hops) -> str:
    node = anchor
    for hop in hops:
        inverse = hop.startswith("~")
        rel = hop.lstrip("~")
        if inverse:
            hits = [s for s, r, o in facts if r == rel and o == node]
        else:
            hits = [o for s, r, o in facts if r == rel and s == node]
        assert len(hits) == 1, (anchor, hop, hits)
        node = hits[0]
    return node


def write_hotpot(out: Path, rng: random.Random) -> None:
    rows = []
    for i, world in enumerate(BRIDGE_WORLDS):
        facts = world["facts"]
        answer = world.get("answer") or follow(facts, world["anchor"], world["hops"])
        if "answer" in world:
            assert world["answer"].lower() in follow(facts, world["anchor"], world["hops"]).lower()
        by_subject = {}
        for s, r, o in facts:
            by_subject.setdefault(s, []).append(f"{s} {r} {o}.")
        context = [[title, sentences] for title, sentences in by_subject.items()]
        rng.shuffle(context)
        rows.append({
            "_id": f"bridge-{i}",
            "question": world["question"],
            "answer": answer,
            "type": "bridge",
            "level": "hard",
            "context": context,
            "structured": {
                "facts": [list(f) for f in facts],
                "chain": {"anchor": world["anchor"],
                          "hops": [{"relation": h.lstrip("~"),
                                    "direction": "inverse" if h.startswith("~") else "forward"}
                                   for h in world["hops"]]},
            },
        })
    # Rows the loader filters out: a comparison question and a medium one.
    rows.insert(3, {"_id": "comparison-0", "question": "Which is older, Tarnfield or Vireo?", "answer": "Vireo",
                    "type": "comparison", "level": "hard", "context": [["Vireo", ["Vireo is old."]]]})
    rows.insert(7, {"_id": "medium-0", "question": "Who wrote The Ember Cycle?", "answer": "Lysander Coyle",
                    "type": "bridge", "level": "medium", "context": [["The Ember Cycle", ["It is a novel."]]]})
    write_json(out / "hotpotqa" / "hotpotqa.json", rows)
    kept = [r for r in rows if r["type"] == "bridge" and r["level"] == "hard"]
    write_json(out / "hotpotqa" / "manifest.json",
               manifest("hotpotqa", "hotpotqa", "hotpotqa.json", ["hard-bridge"] * len(kept), ["hard-bridge"]))


# ---------------------------------------------------------------------------
# Logical inference (entailment chains)

TAXONOMIES = [
    (["a robin", "songbird", "bird", "animal", "living thing", "organism", "life form"], "needs", "food"),
    (["an oak", "deciduous tree", "tree", "plant", "producer", "organism", "life form"], "requires", "sunlight"),
    (["granite", "igneous rock", "rock", "solid", "form of matter", "substance", "material"], "has", "mass"),
    (["a copper wire", "copper object", "metal object", "conductor", "electrical path", "circuit part", "component"],
     "conducts", "electricity"),
    (["a frog", "amphibian", "vertebrate", "animal", "consumer", "organism", "life form"], "gets energy from", "eating"),
    (["steam", "water vapor", "gas", "fluid", "form of matter", "substance", "material"], "takes the shape of", "its container"),
]


def closure(facts, rules):
    """Naive fixpoint: apply every rule to every fact combination until stable."""
    known = set(facts)
    depth = {f: 0 for f in facts}
    changed = True
    while changed:
        changed = False
        for premises, conclusion in rules:
            for binding in bindings_for(premises, known):
                fact = tuple(binding.get(t[1:], t) if t.startswith("?") else t for t in conclusion)
                if fact not in known:
                    known.add(fact)
                    prem = [tuple(binding.get(t[1:], t) if t.startswith("?") else t for t in p) for p in premises]
                    depth[fact] = 1 + sum(depth[p] for p in prem)
                    changed = True
    return known, depth


def bindings_for(premises, known):
    results = [{}]
    for p in premises:
        nxt = []
        for b in results:
            for fact in known:
                b2 = dict(b)
                ok = True
                for term, value in zip(p, fact):
                    if term.startswith("?"):
                        if b2.setdefault(term[1:], value) != value:
                            ok = False
                            break
                    elif term.lower() != value.lower():
                        ok = False
                        break
                if ok:
                    nxt.append(b2)
        results = nxt
    return results


def rule_text(premises, conclusion) -> str:
    fmt = lambda p: "(" + ", ".join(p) + ")"  # noqa: E731
    return "IF " + " & ".join(fmt(p) for p in premises) + " THEN " + fmt(conclusion)


def entail_row(row_id, sentences, facts, rules, goal, question):
    known, depth = closure(facts, rules)
    var_index = [i for i, t in enumerate(goal) if t.startswith("?")][0]
    hits = [f for f in known if all(t.startswith("?") or t.lower() == v.lower() for t, v in zip(goal, f))]
    assert len(hits) == 1, (row_id, hits)
    answer = hits[0][var_index]
    return {
        "id": row_id,
        "question": question,
        "answer": answer,
        "length_of_proof": depth[hits[0]],
        "meta": {"triples": {f"sent{i + 1}": s for i, s in enumerate(sentences)}},
        "structured": {"facts": [list(f) for f in facts],
                       "rules": [rule_text(p, c) for p, c in rules],
                       "goal": "(" + ", ".join(goal) + ")"},
    }


ENTAIL_CASES = [
    ("case-sunburn",
     ["sunlight is a kind of solar radiation", "ultraviolet light causes sunburn", "sunlight contains ultraviolet light"],
     [("sunlight", "is a kind of", "solar radiation"), ("ultraviolet light", "causes", "sunburn"),
      ("sunlight", "contains", "ultraviolet light")],
     [([("?s", "is a kind of", "solar radiation"), ("?s", "contains", "?u"), ("?u", "causes", "?e")],
       ("?u", "is the form of solar radiation that causes", "?e"))],
     ("?x", "is the form of solar radiation that causes", "sunburn"),
     "Which form of solar radiation causes sunburn?"),
    ("case-ice-cube",
     ["if something is in the sunlight then that something will absorb solar energy",
      "water is in the solid state , called ice", "an ice cube is placed in the sunlight",
      "an object made of ice that absorbs solar energy changes from solid to liquid",
      "the change from solid to liquid is called melting"],
     [("ice cube", "is placed in", "sunlight"), ("ice cube", "is made of", "ice")],
     [([("?x", "is placed in", "sunlight")], ("?x", "absorbs", "solar energy")),
      ([("?x", "absorbs", "solar energy"), ("?x", "is made of", "ice")], ("?x", "changes from solid to", "liquid")),
      ([("?x", "changes from solid to", "liquid")], ("?x", "undergoes process", "melting"))],
     ("ice cube", "undergoes process", "?p"),
     "Which process caused the ice cube to change to water?"),
    ("case-ocean",
     ["ocean is the largest body of water on earth", "body of water is a source of wild fish",
      "as the size of a body of water increases, the amount of wild fish will increase"],
     [("Ocean", "is", "largest body of water on earth"), ("body of water", "is a source of", "wild fish")],
     [([("?x", "is", "largest body of water on earth"), ("body of water", "is a source of", "?f")],
       ("?x", "is the greatest source of", "?f"))],
     ("?s", "is the greatest source of", "wild fish"),
     "Which of the following is the greatest source of wild fish for human populations?"),
]


def taxonomy_row(row_id, taxonomy, steps, rng: random.Random, distractor):
    chain, relation, value = taxonomy
    entity = chain[0]
    bare = entity.split(" ", 1)[1] if entity.startswith(("a ", "an ")) else entity
    classes = chain[1:]
    sentences = [f"{entity} is a kind of {classes[0]}"]
    facts = [(bare, "is a kind of", classes[0])]
    rules = []
    for i in range(steps - 1):
        sentences.append(f"if something is a kind of {classes[i]} then it is a kind of {classes[i + 1]}")
        rules.append(([("?x", "is a kind of", classes[i])], ("?x", "is a kind of", classes[i + 1])))
    top = classes[steps - 1]
    sentences.append(f"every {top} {relation} {value}")
    rules.append(([("?x", "is a kind of", top)], ("?x", relation, value)))
    d_chain, d_relation, d_value = distractor
    sentences.append(f"if something is a kind of {d_chain[1]} then it {d_relation} {d_value}")
    rules.append(([("?x", "is a kind of", d_chain[1])], ("?x", d_relation, d_value)))
    order = list(range(len(sentences)))
    rng.shuffle(order)
    sentences = [sentences[i] for i in order]
    goal = (bare, relation, "?v")
    question = f"What does {bare} {relation}?"
    return entail_row(row_id, sentences, facts, rules, goal, question)


def write_entailment(out: Path, rng: random.Random) -> None:
    rows = [entail_row(*c) for c in ENTAIL_CASES]
    for steps in range(1, 7):
        for k in range(2):
            taxonomy = TAXONOMIES[(steps + k) % len(TAXONOMIES)]
            distractor = TAXONOMIES[(steps + k + 3) % len(TAXONOMIES)]
            rows.append(taxonomy_row(f"entail-s{steps}-{k}", taxonomy, steps, rng, distractor))
    lines = [json.dumps(r, ensure_ascii=False) for r in rows]
    # A row with a seven-step proof, outside the 1..6 scheme.
    lines.append(json.dumps({"id": "entail-s7-skip", "question": "?", "answer": "x", "length_of_proof": 7,
                             "meta": {"triples": {"sent1": "x"}}}))
    path = out / "entailmentbank" / "entailmentbank.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_json(out / "entailmentbank" / "manifest.json",
               manifest("entailmentbank", "entailmentbank", "entailmentbank.jsonl",
                        [str(r["length_of_proof"]) for r in rows], [str(s) for s in range(1, 7)]))


# ---------------------------------------------------------------------------
# Worked examples: structured forms with the answers pinned by hand. The
# simulations above must agree with every pinned answer.

PINNED = {
    "case-seth-jeremy": "cousin", "case-laura-jonathan": "mother", "case-stephanie-stephen": "niece",
    "case-books": "The Odyssey", "case-dancers": "Jamie", "case-gifts": "blue present",
    "case-birds": "raven", "case-fruits": "mangoes",
    "case-penguins-count": "3", "case-penguins-filter": "1", "case-penguins-last": "Vincent",
    "case-sunburn": "ultraviolet light", "case-ice-cube": "melting", "case-ocean": "Ocean",
}


def write_worked_cases(out: Path, rng: random.Random) -> None:
    cases = []
    for c in CLUTRR_CASES:
        a, b = c["query"]
        cases.append({"id": c["id"], "task": "relation_prediction",
                      "structured": {"facts": c["facts"], "query": [b, a]}})
    for c in SHUFFLE_CASES:
        ex = shuffle_example(*c)
        answer = ex["input"].split("Options:\n")[1].splitlines()[LETTERS.index(ex["target"][1])][4:]
        assert answer == PINNED[c[0]], (c[0], answer)
        cases.append({"id": c[0], "task": "dynamic_entity_prediction", "structured": ex["structured"]})
    for c in DEDUCTION_CASES:
        ex = deduction_example(*c)
        assert c[2][LETTERS.index(ex["target"][1])] == PINNED[c[0]], c[0]
        cases.append({"id": c[0], "task": "graph_sorting", "structured": ex["structured"]})
    for ex_id, _, where, projection, with_james in PENGUIN_QUESTIONS:
        if ex_id not in PINNED:
            continue
        rows = PENGUINS + ([JAMES] if with_james else [])
        assert str(penguin_answer(rows, where, projection)) == PINNED[ex_id], ex_id
        cases.append({"id": ex_id, "task": "graph_query",
                      "structured": {"table": penguin_table(rows), "class": "penguin", "where": where,
                                     "projection": projection}})
    for c in ENTAIL_CASES:
        row = entail_row(*c)
        assert row["answer"] == PINNED[c[0]], (c[0], row["answer"])
        cases.append({"id": c[0], "task": "logical_inference", "structured": row["structured"]})
    for case in cases:
        case["answer"] = PINNED[case["id"]]
    write_json(out / "worked_cases.json", cases)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[2] / "fixtures")
    parser.add_argument("--seed", type=int, default=20240201)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    table = kin.step_table(kin.observed_compositions())
    write_clutrr(args.out, rng, table)
    write_shuffled(args.out, rng)
    write_deduction(args.out, rng)
    write_penguins(args.out)
    write_colored(args.out, rng)
    write_hotpot(args.out, rng)
    write_entailment(args.out, rng)
    write_worked_cases(args.out, rng)


if __name__ == "__main__":
    main()
