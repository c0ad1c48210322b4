#!/usr/bin/env python3
"""Writes the fixture corpus under fixtures/. Seeded, so reruns reproduce the same files."""

import argparse
import json
import random
from pathlib import Path


def cantor_pair(x, y):
    d = x + y
    return d * (d + 1) // 2 + y


def column_code(n, x, y):
    return cantor_pair(n, cantor_pair(x, y))


def rule(kind, params=None, pace=1, modulus=1, residue=0):
    r = {"kind": kind}
    if params is not None:
        r["params"] = params
    if pace != 1:
        r["pace"] = pace
    if modulus != 1:
        r["modulus"] = modulus
        r["residue"] = residue
    return r


def program(r, infinite=True):
    return {"entries": [], "rule": r, "infinite": infinite}


def registry(mimic, pace):
    # Four totals (identity, a retracing mimic, a constant, successor) and four partial
    # programs whose domains are infinite residue classes, the evens among them.
    return {
        "cycle": True,
        "programs": [
            program(rule("identity", pace=pace)),
            program(rule("affine", mimic, pace=pace)),
            program(rule("constant", [0], pace=pace)),
            program(rule("successor", pace=pace)),
            program(rule("identity", pace=pace, modulus=2, residue=0)),
            program(rule("constant", [0], pace=pace, modulus=3, residue=0)),
            program(rule("identity", pace=pace, modulus=4, residue=1)),
            program(rule("successor", pace=pace, modulus=7, residue=5)),
        ],
    }


def set_functionals(pace):
    return [
        {"axioms": [], "rule": {"kind": "constant", "c": 0, "size": 1, "pace": pace}},
        {"axioms": [], "rule": {"kind": "constant", "c": 1, "size": 2, "pace": pace}},
        {"axioms": [], "rule": {"kind": "parity", "c": 0, "size": 1, "pace": pace}},
        {"axioms": [], "rule": {"kind": "threshold", "c": 50, "size": 3, "pace": pace}},
    ]


def column_bundle(entries, lag, operators):
    b = [3 * i + 2 + (1 if (i * 7) % 3 == 0 else 0) for i in range(entries)]
    bs = set(b)

    def outside(v):
        while v in bs:
            v += 1
        return v

    ops = []
    for e in range(operators):
        w = outside(3 * (e + 1))
        if e % 4 == 0:  # collects column e once b^e is in, late
            ax = {"set": [column_code(e, b[e], 0)], "n": w, "stage": 2 * e + 12}
        elif e % 4 == 1:  # outputs a member of B, never usable
            ax = {"set": [column_code(e, b[e], 0)], "n": b[3], "stage": 1}
        elif e % 4 == 2:  # premise sits in the wrong column
            ax = {"set": [column_code(e + 1, b[e + 1], 0)], "n": w, "stage": 1}
        else:  # needs two cells of column e
            ax = {"set": [column_code(e, b[e], 0), column_code(e, b[e], 1)], "n": w, "stage": 3 * e + 20}
        ops.append({"kind": "extensional", "axioms": [ax]})
    slow = 1 << 60
    phis = [
        {"axioms": [], "rule": {"kind": "constant", "c": 1, "size": 3, "pace": slow}},
        {"axioms": [], "rule": {"kind": "constant", "c": 0, "size": 2, "pace": slow}},
        {"axioms": [], "rule": {"kind": "parity", "c": 0, "size": 5, "pace": slow}},
        {"axioms": [], "rule": {"kind": "threshold", "c": 1000, "size": 4, "pace": slow}},
    ]
    return {"column_base": {"b": b, "lag": lag}, "operators": ops, "functionals": phis}


# ---- pruning grid -------------------------------------------------------------------------


def random_tree(rng, depth, density):
    nodes = {""}
    frontier = [""]
    while frontier:
        s = frontier.pop()
        if len(s) == depth:
            continue
        kids = [c for c in "01" if rng.random() < density]
        if not kids:
            kids = [rng.choice("01")] if rng.random() < 0.7 else []
        for c in kids:
            nodes.add(s + c)
            frontier.append(s + c)
    return nodes


def deep_branches(nodes, depth):
    return sorted(s for s in nodes if len(s) == depth)


def members(s):
    return [i for i, c in enumerate(s) if c == "1"]


def random_op(rng, depth, target, universe):
    kind = rng.choice(["copy", "copy", "guard", "const", "div"])
    if kind == "div":
        return {"kind": "div-even"}
    axioms = []
    if kind == "copy":
        lo = rng.randrange(0, max(1, depth // 2))
        for x in range(lo, depth):
            axioms.append({"set": [x], "n": x, "stage": rng.randint(x + 1, depth)})
    elif kind == "guard":
        for _ in range(rng.randint(1, 4)):
            a = rng.randrange(depth)
            axioms.append({"set": [a], "n": rng.randrange(universe + 1), "stage": rng.randint(a + 1, depth)})
        for m in target:
            axioms.append({"set": [m], "n": m, "stage": rng.randint(1, depth)})
    else:
        for m in rng.sample(range(universe + 1), rng.randint(1, 3)):
            axioms.append({"set": [], "n": m, "stage": rng.randint(1, depth)})
    return {"kind": "extensional", "axioms": axioms}


def prune_grid(rng, count):
    grid = []
    # Case 1 on the first operator, Case 3 on the second.
    d = 3
    tree = sorted({""} | {s[:i] for s in ["100", "101", "110", "111"] for i in range(d + 1)})
    grid.append({
        "name": "case1-then-case3",
        "tree": {"depth": d, "nodes": tree},
        "ops": [
            {"kind": "extensional", "axioms": [{"set": [], "n": 0, "stage": 1}, {"set": [], "n": 9, "stage": 1}]},
            {"kind": "extensional", "axioms": [{"set": [0], "n": 0, "stage": 1}]},
        ],
        "target": {"members": [0], "universe": 9},
    })
    grid.append({
        "name": "no-operators",
        "tree": {"depth": 2, "nodes": ["", "0", "00"]},
        "ops": [],
        "target": {"members": [], "universe": 2},
    })
    grid.append({
        "name": "no-full-branch",
        "tree": {"depth": 3, "nodes": ["", "0", "01"]},
        "ops": [{"kind": "extensional", "axioms": []}],
        "target": {"members": [], "universe": 3},
    })
    while len(grid) < count:
        depth = rng.randint(3, 12)
        density = rng.choice([0.35, 0.5, 0.65])
        nodes = random_tree(rng, depth, density)
        while not deep_branches(nodes, depth):
            nodes = random_tree(rng, depth, density)
        deep = deep_branches(nodes, depth)
        universe = depth - 1
        if rng.random() < 0.8:
            seed_branch = rng.choice(deep)
            target = [m for m in members(seed_branch) if m >= rng.randrange(0, max(1, depth // 2))]
        else:
            target = sorted(rng.sample(range(universe + 1), rng.randint(0, min(4, universe + 1))))
        ops = [random_op(rng, depth, target, universe) for _ in range(rng.randint(1, 4))]
        if rng.random() < 0.7:
            # Plant an operator that outputs exactly the target, so most instances have an answer.
            exact = [{"set": [], "n": m, "stage": rng.randint(1, depth)} for m in target]
            ops[rng.randrange(len(ops))] = {"kind": "extensional", "axioms": exact}
        grid.append({
            "name": f"random-{len(grid)}",
            "tree": {"depth": depth, "nodes": sorted(nodes, key=lambda s: (len(s), s))},
            "ops": ops,
            "target": {"members": sorted(target), "universe": universe},
        })
    return grid


# ---- majorizer fixtures -------------------------------------------------------------------


def majorization_fixture(rng, name, regressive, length, depth, N):
    if regressive:
        # A regressive chain: a_2 lands below a_1 and the rest wander.
        A = [0]
        pool = list(range(1, N // 2))
        rng.shuffle(pool)
        A += pool[: length - 1]
        if A[2] > A[1]:
            A[1], A[2] = A[2], A[1]
    else:
        A = sorted(rng.sample(range(1, N // 2), length - 1))
        A = [0] + A
    f = {A[0]: A[0]}
    for i in range(1, length):
        f[A[i]] = A[i - 1]
    used = set(A)
    free = [y for y in range(N + 1) if y not in used]
    rng.shuffle(free)
    # Dead decoy chains hanging off path nodes, each shorter than the lookahead depth.
    for _ in range(length):
        if len(free) < depth:
            break
        at = rng.choice(A[:-1])
        prev = at
        for _ in range(rng.randint(1, depth - 1)):
            y = free.pop()
            f[y] = prev
            prev = y
    for y in range(N + 1):
        f.setdefault(y, A[0])
    return {
        "name": name,
        "regressive": regressive,
        "depth": depth,
        "bound": N,
        "sequence": A,
        "decode": length - depth - 1,
        "f": [f[y] for y in range(N + 1)],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    def dump(name, obj):
        path = out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(obj, indent=1) + "\n")

    dump("coimmune_retraceable.json", {"registry": registry([1, -1], 16)})
    dump("regressive_not_ce.json", {"registry": registry([1, -2], 64)})
    dump("total_regressor.json", {"registry": registry([1, -1], 64)})
    dump("coimmune_regressive.json", {"registry": registry([1, -1], 64), "functionals": set_functionals(64)})
    dump("column.json", column_bundle(260, 4, 16))
    dump("retraceable_avoiding.json", {"avoid_sets": [
        {"kind": "multiples", "k": 3},
        {"kind": "progression", "start": 5, "step": 4},
        {"kind": "list", "items": [1, 100, 1000, 100000]},
        {"kind": "multiples", "k": 2},
        {"kind": "progression", "start": 40, "step": 7},
        {"kind": "multiples", "k": 5},
    ]})

    grid = prune_grid(rng, 64)
    dump("prune_grid.json", grid)
    ex = grid[0]
    dump("prune_example/tree.json", ex["tree"])
    dump("prune_example/ops.json", ex["ops"])
    dump("prune_example/target.json", ex["target"])

    fixtures = []
    for i in range(10):
        regressive = i % 2 == 1
        fixtures.append(majorization_fixture(rng, f"{'regressive' if regressive else 'retraceable'}-{i}",
                                             regressive, length=14, depth=3, N=160))
    dump("majorization.json", fixtures)

    dump("deciders/pair.json", {"deciders": [{"kind": "exclude", "m": 6}, {"kind": "exclude", "m": 20}]})
    dump("deciders/triple.json", {"deciders": [{"kind": "exclude", "m": 4}, {"kind": "exclude", "m": 15}]})
    dump("deciders/subtriple.json", {"deciders": [{"kind": "copy-tail"}, {"kind": "exclude", "m": 12}]})
    dump("deciders/hechler.json", {"ambient": {"kind": "affine", "params": [2, 1]},
                                   "deciders": [{"kind": "raise", "n": 5, "value": 40},
                                                {"kind": "raise", "n": 9, "value": 100}]})

if __name__ == "__main__":
    main()
