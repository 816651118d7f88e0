"""Genealogy simulator: relations read off a family tree, not composed.

Trees have no remarriage, no half siblings and no unions between relatives,
so every child has exactly the two married parents that produced it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

MALE_NAMES = [
    "Aaron", "Brian", "Calvin", "Dennis", "Edgar", "Felix", "Gordon", "Harold", "Isaac", "Jerome",
    "Kevin", "Lionel", "Marcus", "Nolan", "Oscar", "Percy", "Quentin", "Rupert", "Simon", "Tobias",
    "Ulrich", "Victor", "Walter", "Xavier", "Yusuf", "Zane", "Arthur", "Bernard", "Clifford", "Desmond",
    "Elliot", "Franklin", "Gilbert", "Howard", "Ivan", "Julian", "Kenneth", "Leonard", "Mitchell", "Norman",
]
FEMALE_NAMES = [
    "Abigail", "Beatrice", "Cecilia", "Daphne", "Eleanor", "Fiona", "Gloria", "Hazel", "Irene", "Judith",
    "Kathleen", "Lorraine", "Miriam", "Nadine", "Olivia", "Priscilla", "Rosalind", "Sabrina", "Theresa", "Ursula",
    "Vivian", "Wilma", "Yvonne", "Zelda", "Agnes", "Bridget", "Clarissa", "Dolores", "Edith", "Florence",
    "Gwendolyn", "Harriet", "Imogen", "Josephine", "Katrina", "Lucinda", "Marjorie", "Nora", "Ophelia", "Pauline",
]

LABELS = {
    "parent": ("father", "mother"),
    "child": ("son", "daughter"),
    "sibling": ("brother", "sister"),
    "spouse": ("husband", "wife"),
    "grandparent": ("grandfather", "grandmother"),
    "grandchild": ("grandson", "granddaughter"),
    "pibling": ("uncle", "aunt"),
    "nibling": ("nephew", "niece"),
    "cousin": ("cousin", "cousin"),
    "parent_in_law": ("father-in-law", "mother-in-law"),
    "child_in_law": ("son-in-law", "daughter-in-law"),
    "sibling_in_law": ("brother-in-law", "sister-in-law"),
}

BLOOD = {
    (1, 0): "parent", (0, 1): "child", (1, 1): "sibling", (2, 0): "grandparent",
    (0, 2): "grandchild", (2, 1): "pibling", (1, 2): "nibling", (2, 2): "cousin",
}


@dataclass(eq=False)
class Person:
    name: str
    male: bool
    parents: list["Person"] = field(default_factory=list)
    spouse: "Person | None" = None
    children: list["Person"] = field(default_factory=list)

    def siblings(self):
        if not self.parents:
            return []
        return [c for c in self.parents[0].children if c is not self]


def label(kind: str, male: bool) -> str:
    return LABELS[kind][0 if male else 1]


def ancestors(p: Person) -> dict:
    depth = {p: 0}
    frontier = [p]
    while frontier:
        nxt = []
        for q in frontier:
            for r in q.parents:
                if r not in depth:
                    depth[r] = depth[q] + 1
                    nxt.append(r)
        frontier = nxt
    return depth


def relation_kind(a: Person, b: Person):
    """Kind such that b is a's <kind>, or None when no benchmark label fits."""
    if a is b:
        return "self"
    up_a, up_b = ancestors(a), ancestors(b)
    common = [c for c in up_a if c in up_b]
    if common:
        up, down = min(((up_a[c], up_b[c]) for c in common), key=sum)
        return BLOOD.get((up, down))
    if a.spouse is b:
        return "spouse"
    if a.spouse is not None and b in a.spouse.parents:
        return "parent_in_law"
    if any(c.spouse is b for c in a.children):
        return "child_in_law"
    if any(s.spouse is b for s in a.siblings()):
        return "sibling_in_law"
    if a.spouse is not None and b in a.spouse.siblings():
        return "sibling_in_law"
    return None


def neighbours(p: Person):
    """(person, kind of that person relative to p) for every direct edge."""
    out = [(q, "parent") for q in p.parents]
    out += [(q, "child") for q in p.children]
    out += [(q, "sibling") for q in p.siblings()]
    if p.spouse is not None:
        out.append((p.spouse, "spouse"))
    return out


class NamePool:
    def __init__(self, rng: random.Random):
        self.male = MALE_NAMES[:]
        self.female = FEMALE_NAMES[:]
        rng.shuffle(self.male)
        rng.shuffle(self.female)

    def take(self, male: bool) -> str:
        return (self.male if male else self.female).pop()


def build_tree(rng: random.Random, generations: int = 4) -> list[Person]:
    names = NamePool(rng)
    people: list[Person] = []

    def person(male: bool) -> Person:
        p = Person(names.take(male), male)
        people.append(p)
        return p

    def marry(p: Person) -> Person:
        q = person(not p.male)
        p.spouse, q.spouse = q, p
        return q

    founder = person(rng.random() < 0.5)
    couples = [(founder, marry(founder))]
    for _ in range(generations - 1):
        nxt = []
        for a, b in couples:
            for _ in range(rng.randint(2, 4)):
                if len(names.male) < 2 or len(names.female) < 2:
                    break
                child = person(rng.random() < 0.5)
                child.parents = [a, b]
                a.children.append(child)
                b.children.append(child)
                if rng.random() < 0.75:
                    nxt.append((child, marry(child)))
        couples = nxt
    return people


def walk_steps(rng: random.Random, start: Person, length: int):
    """A random simple walk; yields (prev_kind, hop_kind, next_kind) per step."""
    path = [start]
    for _ in range(length):
        options = [(q, k) for q, k in neighbours(path[-1]) if q not in path]
        if not options:
            return
        q, hop = rng.choice(options)
        yield relation_kind(start, path[-1]), hop, relation_kind(start, q)
        path.append(q)


def observed_compositions(seed: int = 7, trees: int = 400, walks: int = 60):
    """(prefix kind, hop kind) -> set of resulting kinds over sampled walks."""
    rng = random.Random(seed)
    seen: dict = {}
    for _ in range(trees):
        people = build_tree(rng)
        for _ in range(walks):
            start = rng.choice(people)
            for prev, hop, nxt in walk_steps(rng, start, 10):
                if prev is None:
                    break
                seen.setdefault((prev, hop), set()).add(nxt)
    return seen


def determinable(seen) -> dict:
    return {k: next(iter(v)) for k, v in seen.items() if len(v) == 1 and None not in v}


# Steps that held in every sampled walk but only because the walk may not
# revisit a person, or because married-in spouses have no recorded family.
HISTORY_DEPENDENT = {
    ("grandchild", "parent"), ("grandparent", "child"), ("nibling", "parent"),
    ("parent_in_law", "child"), ("sibling_in_law", "parent"), ("sibling_in_law", "sibling"),
}


def step_table(seen) -> dict:
    return {k: v for k, v in determinable(seen).items() if k not in HISTORY_DEPENDENT}


def chains(start: Person, length: int, table: dict, rng: random.Random, limit: int = 4000):
    """Simple walks of exactly `length` hops whose every step is in `table`
    and agrees with the tree."""
    found = []
    budget = [limit]

    def dfs(path, kind):
        if budget[0] <= 0 or found:
            return
        budget[0] -= 1
        if len(path) == length + 1:
            found.append(list(path))
            return
        options = [(q, k) for q, k in neighbours(path[-1]) if q not in path]
        rng.shuffle(options)
        for q, hop in options:
            nxt = hop if kind == "self" else table.get((kind, hop))
            if nxt is None or relation_kind(start, q) != nxt:
                continue
            path.append(q)
            dfs(path, nxt)
            path.pop()

    dfs([start], "self")
    return found[0] if found else None


if __name__ == "__main__":
    seen = observed_compositions()
    for (prev, hop), out in sorted(seen.items()):
        tag = "DET" if len(out) == 1 and None not in out else "   "
        print(f"{tag} {prev:>15} + {hop:<8} -> {sorted(map(str, out))}")
