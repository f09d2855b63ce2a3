"""Exact linear algebra over the rationals.

Everything here works on small matrices stored as tuples of tuples (int or
Fraction entries).  Systems are kept sparse during elimination: a row is a
dict mapping column index to a nonzero Fraction.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = tuple[tuple[Fraction, ...], ...]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}")
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [Fraction(0)] * ncols
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(ncols):
                    if brow[j]:
                        acc[j] += x * brow[j]
        out.append(tuple(acc))
    return tuple(out)


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def rank(rows: list[list[Fraction]]) -> int:
    """Rank by fraction-free-ish Gaussian elimination (destructive on a copy)."""
    m = [list(map(Fraction, row)) for row in rows]
    nc = len(m[0]) if m else 0
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: list[dict[int, Fraction]], nvars: int) -> list[list[Fraction]]:
    """Basis of the solution space of a sparse homogeneous system.

    ``rows`` are sparse equations sum(coeff * x[col]) = 0.  Returns dense
    basis vectors of length ``nvars``.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        while r:
            c = min(r)
            if c in pivots:
                f = r[c]
                for cc, vv in pivots[c].items():
                    r[cc] = r.get(cc, Fraction(0)) - f * vv
                    if not r[cc]:
                        del r[cc]
            else:
                inv = 1 / r[c]
                pivots[c] = {cc: vv * inv for cc, vv in r.items()}
                break
    # back-substitute so every pivot row mentions only free columns
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for cc in [cc for cc in row if cc != c and cc in pivots]:
            f = row.pop(cc)
            for c2, v2 in pivots[cc].items():
                if c2 == cc:
                    continue
                row[c2] = row.get(c2, Fraction(0)) - f * v2
                if not row[c2]:
                    del row[c2]
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * nvars
        vec[f] = Fraction(1)
        for c, row in pivots.items():
            if f in row:
                vec[c] = -row[f]
        basis.append(vec)
    return basis
