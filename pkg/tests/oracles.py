"""Brute-force oracles shared by the unit and acceptance suites."""

import itertools


def rref(rows, ell):
    rows = [list(r) for r in rows]
    out, col = [], 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in rows if r[col] % ell), None)
        if piv is None:
            continue
        rows.remove(piv)
        inv = pow(piv[col], -1, ell)
        piv = [x * inv % ell for x in piv]
        rows = [[(x - r[col] * y) % ell for x, y in zip(r, piv)] for r in rows]
        out = [[(x - r[col] * y) % ell for x, y in zip(r, piv)] for r in out]
        out.append(piv)
    return tuple(sorted(tuple(r) for r in out))


def brute_subspaces(ell, k):
    vectors = list(itertools.product(range(ell), repeat=k))
    seen = {()}
    frontier = [()]
    while frontier:
        nxt = []
        for basis in frontier:
            for v in vectors:
                if not any(v):
                    continue
                b = rref(list(basis) + [v], ell)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return len(seen)


def brute_aut(p, lam):
    orders = [p**e for e in lam]
    elements = list(itertools.product(*[range(n) for n in orders]))

    def scale(x, c):
        return tuple(c * xi % n for xi, n in zip(x, orders))

    def add(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, orders))

    zero = tuple(0 for _ in orders)
    # a generator of order n may map to any element killed by n
    options = [[x for x in elements if scale(x, n) == zero] for n in orders]
    count = 0
    for images in itertools.product(*options):
        seen = set()
        for coeffs in elements:
            img = zero
            for c, g in zip(coeffs, images):
                img = add(img, scale(g, c))
            seen.add(img)
        count += len(seen) == len(elements)
    return count
