#!/usr/bin/env python3
"""Brute-force reference values, written to frozen.json next to this script.

Independent of the Rust code: inhomogeneous bar cochains for cyclic groups,
simplicial cochains of the 7-vertex torus, Chevalley-Eilenberg cochains of
small Lie algebras. Ranks by plain Gaussian elimination over Fraction or Z/p.
"""

import itertools
import json
from fractions import Fraction
from pathlib import Path


def rank(rows, p=None):
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    reduce = (lambda x: x % p) if p else (lambda x: x)
    m = [[reduce(x) for x in r] for r in m]
    ncols, r = len(m[0]), 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p) if p else 1 / Fraction(m[r][c])
        m[r] = [reduce(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [reduce(a - f * b) for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows):
    """Basis of {x : rows · x = 0} over Fraction."""
    ncols = len(rows[0])
    m = [[Fraction(x) for x in r] for r in rows]
    pivots, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for i, c in enumerate(pivots):
            x[c] = -m[i][free]
        basis.append(x)
    return basis


def betti(dims, ds, p=None):
    """dims[n] = dim C^n; ds[n] = matrix of d: C^n -> C^{n+1} (rows = targets)."""
    ranks = [rank(d, p) for d in ds]
    out = []
    for n, dim in enumerate(dims):
        rk_out = ranks[n] if n < len(ranks) else 0
        rk_in = ranks[n - 1] if n > 0 else 0
        out.append(dim - rk_out - rk_in)
    return out


# --- group cohomology with trivial coefficients, inhomogeneous cochains ---

def cyclic_bar(m, top):
    """Cochains f: G^n -> k; (df)(g_1..g_{n+1}) = f(g_2..) + sum (-1)^i f(..g_i g_{i+1}..) + (-1)^{n+1} f(g_1..g_n)."""
    tuples = [list(itertools.product(range(m), repeat=n)) for n in range(top + 2)]
    index = [{t: i for i, t in enumerate(ts)} for ts in tuples]
    ds = []
    for n in range(top + 1):
        d = [[0] * len(tuples[n]) for _ in tuples[n + 1]]
        for row, g in enumerate(tuples[n + 1]):
            d[row][index[n][g[1:]]] += 1
            for i in range(n):
                t = g[:i] + ((g[i] + g[i + 1]) % m,) + g[i + 2:]
                d[row][index[n][t]] += (-1) ** (i + 1)
            d[row][index[n][g[:-1]]] += (-1) ** (n + 1)
        ds.append(d)
    return tuples, index, ds


def group_dims(m, p, top):
    tuples, _, ds = cyclic_bar(m, top)
    return betti([len(t) for t in tuples[: top + 1]], ds, p)


def z2_cup_powers_nonzero(top):
    """x = the nonzero 1-cocycle; x^a cup x^b = x^{a+b} is never a coboundary for a + b <= top."""
    tuples, index, ds = cyclic_bar(2, top)
    x = {(g,): g % 2 for g in range(2)}

    def cup(a, pa, b, pb):
        return {g: (a[g[:pa]] * b[g[pa:]]) % 2 for g in tuples[pa + pb]}

    powers = [{(): 1}]
    for n in range(1, top + 1):
        powers.append(cup(powers[-1], n - 1, x, 1))
    ok = True
    for a in range(top + 1):
        for b in range(top + 1 - a):
            c = cup(powers[a], a, powers[b], b)
            vec = [c[g] for g in tuples[a + b]]
            if a + b == 0:
                ok &= vec != [0]
                continue
            d = ds[a + b - 1]
            img = [list(col) for col in zip(*d)]
            ok &= rank(img + [vec], 2) > rank(img, 2)
    return ok


# --- simplicial cohomology of the 7-vertex torus ---

def torus():
    facets = [sorted([i, (i + 1) % 7, (i + 3) % 7]) for i in range(7)]
    facets += [sorted([i, (i + 2) % 7, (i + 3) % 7]) for i in range(7)]
    simplices = [sorted({tuple(c) for f in facets for c in itertools.combinations(f, k + 1)}) for k in range(3)]
    index = [{s: i for i, s in enumerate(ss)} for ss in simplices]
    ds = []
    for k in range(2):
        d = [[0] * len(simplices[k]) for _ in simplices[k + 1]]
        for row, s in enumerate(simplices[k + 1]):
            for i in range(len(s)):
                d[row][index[k][s[:i] + s[i + 1:]]] += (-1) ** i
        ds.append(d)
    return simplices, index, ds


def torus_dims():
    simplices, _, ds = torus()
    return betti([len(s) for s in simplices], ds)


def torus_h1_pairing():
    """Gram matrix of <a ∪ b, [T]> on an H^1 basis, with (a ∪ b)(v0 v1 v2) = a(v0 v1) b(v1 v2)."""
    simplices, index, ds = torus()
    d0, d1 = ds
    coboundaries = [list(col) for col in zip(*d0)]
    reps = []
    for z in nullspace(d1):
        if rank(coboundaries + reps + [z]) > rank(coboundaries + reps):
            reps.append(z)
    [fundamental] = nullspace([list(col) for col in zip(*d1)])

    def pair(a, b):
        return sum(
            fundamental[t] * a[index[1][(v0, v1)]] * b[index[1][(v1, v2)]]
            for t, (v0, v1, v2) in enumerate(simplices[2])
        )

    g = [[pair(a, b) for b in reps] for a in reps]
    return {
        "h1_dim": len(reps),
        "alternating": all(g[i][j] == -g[j][i] for i in range(len(g)) for j in range(len(g))),
        "rank": rank(g),
    }


# --- Chevalley-Eilenberg cohomology with trivial coefficients ---

def ce_dims(dim, brackets):
    """(dw)(x_0..x_p) = sum_{i<j} (-1)^{i+j} w([x_i,x_j], x_0..^i..^j..x_p)."""
    subsets = [list(itertools.combinations(range(dim), p)) for p in range(dim + 1)]
    index = [{s: i for i, s in enumerate(ss)} for ss in subsets]

    def br(i, j):
        if (i, j) in brackets:
            return brackets[(i, j)]
        if (j, i) in brackets:
            return [-c for c in brackets[(j, i)]]
        return [0] * dim

    def wedge_coord(vec_pos, rest):
        """Coordinate of e_k ∧ rest in the sorted basis: (sign, subset) or None."""
        if vec_pos in rest:
            return None
        s = sorted((vec_pos,) + rest)
        sign = (-1) ** sum(1 for r in rest if r < vec_pos)
        return sign, tuple(s)

    ds = []
    for p in range(dim):
        d = [[Fraction(0)] * len(subsets[p]) for _ in subsets[p + 1]]
        for row, s in enumerate(subsets[p + 1]):
            for i, j in itertools.combinations(range(p + 1), 2):
                rest = tuple(x for k, x in enumerate(s) if k not in (i, j))
                for k, c in enumerate(br(s[i], s[j])):
                    if c == 0:
                        continue
                    w = wedge_coord(k, rest)
                    if w:
                        d[row][index[p][w[1]]] += (-1) ** (i + j) * w[0] * c
        ds.append(d)
    return betti([len(s) for s in subsets], ds)


def main():
    frozen = {
        "group_z2_f2_dims": group_dims(2, 2, 4),
        "group_z3_q_dims": group_dims(3, None, 4),
        "group_z3_f3_dims": group_dims(3, 3, 4),
        "group_z2_f2_cup_powers_nonzero": z2_cup_powers_nonzero(4),
        "torus_q_dims": torus_dims(),
        "torus_q_h1_pairing": torus_h1_pairing(),
        "abelian3_ce_dims": ce_dims(3, {}),
        "heisenberg_ce_dims": ce_dims(3, {(0, 1): [0, 0, 1]}),
    }
    out = Path(__file__).with_name("frozen.json")
    out.write_text(json.dumps(frozen, indent=2, sort_keys=True) + "\n")
    print(json.dumps(frozen, sort_keys=True))


if __name__ == "__main__":
    main()
