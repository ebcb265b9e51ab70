#!/usr/bin/env python3
"""Small, slow, independent Khovanov homology over Z for test fixtures.

Builds the cube of resolutions directly from a PD code, assembles dense
integer matrices per bigrade and reads off free ranks and torsion with
sympy's Smith normal form. Shares no code with the Rust engine.

PD reading: in X(a,b,c,d) the under-strand runs a -> c; the crossing is
positive when the over-strand runs b -> d. The positive marker joins arcs
(a,d) and (b,c), the negative marker joins (a,b) and (c,d).

Usage: khovanov_oracle.py NAME=PD ... > fixture.json
"""

import itertools
import json
import re
import sys

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form


def parse(pd):
    return [tuple(map(int, m)) for m in re.findall(r"X\((\d+),(\d+),(\d+),(\d+)\)", pd)]


def signs(xs):
    # out_slot[arc] / in_slot[arc]: which crossing slot the arc leaves / enters
    incoming = {}
    for k, (a, b, c, d) in enumerate(xs):
        incoming[(k, 0)] = True
        incoming[(k, 2)] = False
    slots = {}
    for k, x in enumerate(xs):
        for p, arc in enumerate(x):
            slots.setdefault(arc, []).append((k, p))
    changed = True
    while changed:
        changed = False
        for arc, (s, t) in slots.items():
            for u, v in ((s, t), (t, s)):
                if u in incoming and v not in incoming:
                    incoming[v] = not incoming[u]
                    changed = True
        for k in range(len(xs)):
            for p, q in ((1, 3), (3, 1)):
                if (k, p) in incoming and (k, q) not in incoming:
                    incoming[(k, q)] = not incoming[(k, p)]
                    changed = True
    return [1 if incoming[(k, 1)] else -1 for k in range(len(xs))]


def circles(xs, state):
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for k, (a, b, c, d) in enumerate(xs):
        if state >> k & 1:
            union(a, b)
            union(c, d)
        else:
            union(a, d)
            union(b, c)
    roots = sorted({find(a) for x in xs for a in x})
    return {a: roots.index(find(a)) for x in xs for a in x}, len(roots)


def homology(pd):
    xs = parse(pd)
    n = len(xs)
    w = sum(signs(xs))
    gens = {}
    info = {}
    for s in range(1 << n):
        arcmap, m = circles(xs, s)
        k = bin(s).count("1")
        i = k - (n - w) // 2
        j0 = (3 * w - (n - 2 * k)) // 2
        info[s] = (arcmap, m)
        for labels in range(1 << m):
            q = j0 + m - 2 * bin(labels).count("1")
            gens.setdefault((i, q), []).append((s, labels))
    index = {g: (b, t) for b, gs in gens.items() for t, g in enumerate(gs)}

    def image(s, labels):
        out = []
        for c in range(n):
            if s >> c & 1:
                continue
            t = s | 1 << c
            sign = (-1) ** bin(s & ((1 << c) - 1)).count("1")
            a, b, cc, d = xs[c]
            src, m = info[s]
            dst, m2 = info[t]
            # circle correspondence through arcs away from the crossing
            corr = {}
            for arc, ci in src.items():
                corr.setdefault(ci, set()).add(dst[arc])
            if m2 == m - 1:
                p, r = src[a], src[b]
                x, y = labels >> p & 1, labels >> r & 1
                if x and y:
                    continue
                new = 0
                for ci in range(m):
                    if ci not in (p, r) and labels >> ci & 1:
                        new |= 1 << next(iter(corr[ci]))
                new |= (x | y) << dst[a]
                out.append(((t, new), sign))
            else:
                p = src[a]
                r1, r2 = dst[a], dst[cc]
                base = 0
                for ci in range(m):
                    if ci != p and labels >> ci & 1:
                        base |= 1 << next(iter(corr[ci]))
                if labels >> p & 1:
                    out.append(((t, base | 1 << r1 | 1 << r2), sign))
                else:
                    out.append(((t, base | 1 << r1), sign))
                    out.append(((t, base | 1 << r2), sign))
        return out

    def matrix(b):
        src = gens.get(b, [])
        tgt = gens.get((b[0] + 1, b[1]), [])
        mat = [[0] * len(src) for _ in tgt]
        for col, (s, labels) in enumerate(src):
            for g, v in image(s, labels):
                mat[index[g][1]][col] += v
        return mat

    def invariants(mat):
        if not mat or not mat[0]:
            return []
        snf = smith_normal_form(Matrix(mat), domain=ZZ)
        return [abs(int(snf[k, k])) for k in range(min(snf.shape)) if snf[k, k] != 0]

    groups = []
    for b in sorted(gens):
        out = invariants(matrix(b))
        inc = invariants(matrix((b[0] - 1, b[1])))
        free = len(gens[b]) - len(out) - len(inc)
        torsion = sorted(t for t in inc if t > 1)
        if free or torsion:
            groups.append({"i": b[0], "j": b[1], "free": free, "torsion": torsion})
    return {"pd": pd, "writhe": w, "groups": groups}


def main():
    out = {}
    for arg in sys.argv[1:]:
        name, pd = arg.split("=", 1)
        out[name] = homology(pd)
    json.dump(out, sys.stdout, indent=1, sort_keys=True)
    print()


if __name__ == "__main__":
    main()
