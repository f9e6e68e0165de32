"""Slow, obviously-correct reference computations used by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from math import gcd


def leibniz_det(rows: list[list[int]]) -> int:
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = -1 if inv & 1 else 1
        for r in range(n):
            term *= rows[r][perm[r]]
        total += term
    return total


def determinantal_divisors(rows: list[list[int]]) -> list[int]:
    """Invariant factors d_k = D_k / D_{k-1}, D_k = gcd of k-minors (nonzero ones only)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for R in combinations(range(m), k):
            for C in combinations(range(n), k):
                g = gcd(g, leibniz_det([[rows[r][c] for c in C] for r in R]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def rank_fraction(rows: list[list[int]], p: int = 0) -> int:
    """Rank over Q (p = 0) or Z/p by plain Gaussian elimination."""
    if p:
        M = [[x % p for x in r] for r in rows]
    else:
        M = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                if p:
                    f = M[r][c] * pow(M[rank][c], -1, p) % p
                    M[r] = [(a - f * b) % p for a, b in zip(M[r], M[rank])]
                else:
                    f = M[r][c] / M[rank][c]
                    M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def brute_colorings(vertices: int, edges, k: int) -> int:
    return sum(
        1 for col in product(range(k), repeat=vertices) if all(col[u] != col[v] for u, v in edges)
    )


def interpolate_chromatic(vertices: int, edges) -> list[int]:
    """Coefficients of P(G; t) by Lagrange interpolation of brute-force counts."""
    pts = list(range(vertices + 1))
    vals = [brute_colorings(vertices, edges, k) for k in pts]
    coeffs = [Fraction(0)] * (vertices + 1)
    for i, xi in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += vals[i] * b / denom
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def uniform_char_poly(k: int, n: int) -> list[int]:
    """chi(U_{k,n}; t) = sum_S (-1)^{|S|} t^{k - min(k, |S|)}."""
    from math import comb

    coeffs = [0] * (k + 1)
    for s in range(n + 1):
        coeffs[k - min(k, s)] += (-1) ** s * comb(n, s)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def deletion_contraction(vertices: int, edges) -> list[int]:
    """Chromatic polynomial coefficients by P(G) = P(G - e) - P(G / e)."""
    edges = [tuple(e) for e in edges]
    if any(u == v for u, v in edges):
        return []
    if not edges:
        return [0] * vertices + [1]
    (u, v), rest = edges[0], edges[1:]
    merged = []
    for a, b in rest:
        a, b = (u if a == v else a), (u if b == v else b)
        a, b = (a - 1 if a > v else a), (b - 1 if b > v else b)
        merged.append((a, b))
    # parallel copies of the contracted edge become loops; drop duplicates otherwise
    keep = []
    for a, b in merged:
        key = (min(a, b), max(a, b))
        if a == b or key not in keep:
            keep.append(key)
    dele = deletion_contraction(vertices, rest)
    cont = deletion_contraction(vertices - 1, keep)
    out = [0] * max(len(dele), len(cont))
    for k, c in enumerate(dele):
        out[k] += c
    for k, c in enumerate(cont):
        out[k] -= c
    while out and out[-1] == 0:
        out.pop()
    return out
