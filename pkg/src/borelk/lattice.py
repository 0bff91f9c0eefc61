"""Exact integer lattice routines: Hermite and Smith normal forms.

Lattices are spanned by *row* vectors given as lists of Python ints, so
coefficient growth is never an issue beyond speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

Vector = list[int]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@dataclass
class Echelon:
    """Row Hermite normal form of a list of vectors.

    ``rows`` are the nonzero HNF rows, ``pivots`` their pivot columns.
    When computed with a transform, ``transform[i]`` expresses row ``i`` of
    the full reduced matrix in terms of the input rows; rows past
    ``len(self.rows)`` span the integer left kernel.
    """

    ncols: int
    rows: list[Vector]
    pivots: list[int]
    transform: list[Vector] | None = None
    nrows_in: int = 0
    _kernel: list[Vector] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def kernel(self) -> list[Vector]:
        return [list(v) for v in self._kernel]

    def reduce(self, vec: Sequence[int]) -> tuple[Vector, Vector]:
        """Reduce ``vec`` against the echelon rows.

        Returns ``(coeffs, residue)`` where ``vec == sum(coeffs[i] * rows[i]) + residue``
        and residue is zero iff ``vec`` lies in the lattice.
        """
        v = list(vec)
        if len(v) != self.ncols:
            raise ValueError(f"vector length {len(v)} != {self.ncols}")
        coeffs = [0] * len(self.rows)
        for i, (row, p) in enumerate(zip(self.rows, self.pivots)):
            if v[p] == 0:
                continue
            q, r = divmod(v[p], row[p])
            if r:
                return coeffs, v
            coeffs[i] = q
            for j in range(p, self.ncols):
                v[j] -= q * row[j]
        return coeffs, v

    def contains(self, vec: Sequence[int]) -> bool:
        _, residue = self.reduce(vec)
        return not any(residue)

    def solve(self, vec: Sequence[int]) -> Vector | None:
        """Integer coefficients on the *input* rows reproducing ``vec``, or None."""
        if self.transform is None:
            raise ValueError("echelon form was computed without a transform")
        coeffs, residue = self.reduce(vec)
        if any(residue):
            return None
        out = [0] * self.nrows_in
        for c, urow in zip(coeffs, self.transform):
            if c:
                for k, u in enumerate(urow):
                    out[k] += c * u
        return out


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None,
        transform: bool = False) -> Echelon:
    """Row-style Hermite normal form with positive pivots.

    Entries above each pivot are reduced into ``[0, pivot)``, so the
    result is canonical for the lattice.
    """
    a = [list(r) for r in rows]
    m = len(a)
    if ncols is None:
        if not a:
            raise ValueError("ncols required for an empty row list")
        ncols = len(a[0])
    if any(len(r) != ncols for r in a):
        raise ValueError("ragged matrix")
    u = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None

    def combine(i: int, k: int, x: int, y: int, s: int, t: int) -> None:
        # (row_i, row_k) <- (x*row_i + y*row_k, s*row_i + t*row_k)
        ri, rk = a[i], a[k]
        a[i] = [x * p + y * q for p, q in zip(ri, rk)]
        a[k] = [s * p + t * q for p, q in zip(ri, rk)]
        if u is not None:
            ui, uk = u[i], u[k]
            u[i] = [x * p + y * q for p, q in zip(ui, uk)]
            u[k] = [s * p + t * q for p, q in zip(ui, uk)]

    r = 0
    pivots: list[int] = []
    for col in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            b = a[i][col]
            if b == 0:
                continue
            piv = a[r][col]
            g, x, y = xgcd(piv, b)
            combine(r, i, x, y, -b // g, piv // g)
        piv = a[r][col]
        if piv == 0:
            continue
        if piv < 0:
            a[r] = [-v for v in a[r]]
            if u is not None:
                u[r] = [-v for v in u[r]]
            piv = -piv
        for k in range(r):
            q = a[k][col] // piv
            if q:
                a[k] = [p - q * s for p, s in zip(a[k], a[r])]
                if u is not None:
                    u[k] = [p - q * s for p, s in zip(u[k], u[r])]
        pivots.append(col)
        r += 1
    ech = Echelon(ncols=ncols, rows=a[:r], pivots=pivots, nrows_in=m)
    if u is not None:
        ech.transform = u[:r]
        ech._kernel = u[r:]
    return ech


def left_kernel(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Basis of ``{y : sum(y[i] * rows[i]) == 0}``; always a saturated lattice."""
    return hnf(rows, ncols, transform=True).kernel()


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return hnf(rows, ncols).rank


def same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], ncols: int) -> bool:
    ha, hb = hnf(a, ncols), hnf(b, ncols)
    return ha.rows == hb.rows


def lattice_contains(big: Sequence[Sequence[int]], small: Sequence[Sequence[int]],
                     ncols: int) -> bool:
    h = hnf(big, ncols)
    return all(h.contains(v) for v in small)


def transpose(mat: Sequence[Sequence[int]], nrows: int | None = None) -> list[Vector]:
    if not mat:
        return [[] for _ in range(nrows or 0)]
    return [list(col) for col in zip(*mat)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[Vector]:
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def smith_diagonal(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    """Nonzero Smith invariant factors ``d1 | d2 | ...`` (all positive)."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    n = ncols if ncols is not None else len(a[0])
    ech = hnf(a, n)
    a = ech.rows
    if all(v == 0 for row, p in zip(a, ech.pivots) for j, v in enumerate(row) if j != p):
        return _normalize_diagonal([row[p] for row, p in zip(a, ech.pivots)])
    diag: list[int] = []
    while a:
        # pick the entry of smallest absolute value as pivot
        pi, pj, best = -1, -1, None
        for i, row in enumerate(a):
            for j, v in enumerate(row):
                if v and (best is None or abs(v) < best):
                    pi, pj, best = i, j, abs(v)
        if best is None:
            break
        done = False
        while not done:
            done = True
            piv = a[pi][pj]
            for i, row in enumerate(a):
                if i != pi and row[pj]:
                    q = row[pj] // piv
                    a[i] = [x - q * y for x, y in zip(row, a[pi])]
                    if a[i][pj]:
                        pi, done = i, False
                        break
            if not done:
                continue
            for j in range(n):
                if j != pj and a[pi][j]:
                    q = a[pi][j] // piv
                    for row in a:
                        row[j] -= q * row[pj]
                    if a[pi][j]:
                        pj, done = j, False
                        break
            if not done:
                continue
            # pivot must divide every remaining entry
            if abs(piv) == 1:
                continue
            for i, row in enumerate(a):
                if i == pi:
                    continue
                if any(v % piv for v in row):
                    a[pi] = [x + y for x, y in zip(a[pi], row)]
                    done = False
                    break
        diag.append(abs(a[pi][pj]))
        del a[pi]
        for row in a:
            del row[pj]
        n -= 1
        a = [r for r in a if any(r)]
    return _normalize_diagonal(diag)


def _normalize_diagonal(diag: list[int]) -> list[int]:
    """Smith invariants of a diagonal matrix via repeated gcd/lcm exchange."""
    d = sorted(abs(x) for x in diag if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d
