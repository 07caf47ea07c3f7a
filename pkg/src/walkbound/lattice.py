"""Integer lattice normal forms.

Matrices are handled column-wise: a lattice in Z^n is given by a list of
generating columns, each a sequence of ``n`` Python ints. Everything here is
exact; no floating point is involved.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

Column = Tuple[int, ...]


def _axpy(q: int, x: List[int], y: List[int]) -> None:
    # y <- y - q*x, in place
    if q:
        for i, xi in enumerate(x):
            if xi:
                y[i] -= q * xi


def _eliminate(cols: List[List[int]], nrows: int) -> int:
    """Bring ``cols`` into column Hermite form on the first ``nrows`` rows.

    Works in place by unimodular column operations and returns the number of
    pivot columns. Columns past the returned count vanish on the reduced rows.
    """
    k = 0
    for i in range(nrows):
        while True:
            nz = [j for j in range(k, len(cols)) if cols[j][i] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(cols[j][i]))
            cols[k], cols[jmin] = cols[jmin], cols[k]
            if len(nz) == 1:
                break
            piv = cols[k][i]
            for j in range(k + 1, len(cols)):
                if cols[j][i]:
                    _axpy(cols[j][i] // piv, cols[k], cols[j])
        if k >= len(cols) or cols[k][i] == 0:
            continue
        if cols[k][i] < 0:
            cols[k] = [-v for v in cols[k]]
        piv = cols[k][i]
        for j in range(k):
            _axpy(cols[j][i] // piv, cols[k], cols[j])
        k += 1
    return k


def hermite_columns(cols: Sequence[Sequence[int]], n: int) -> Tuple[Column, ...]:
    """Canonical column Hermite normal form of the lattice spanned by ``cols``.

    The result is lower triangular with strictly positive pivots, and every
    entry to the left of a pivot lies in ``[0, pivot)``. Two generating sets
    of the same lattice give identical output.
    """
    work = []
    for c in cols:
        if len(c) != n:
            raise ValueError(f"column of length {len(c)} in a lattice of dimension {n}")
        if any(c):
            work.append([int(v) for v in c])
    k = _eliminate(work, n)
    return tuple(tuple(c) for c in work[:k])


def pivot_rows(basis: Sequence[Column]) -> List[int]:
    out = []
    for c in basis:
        out.append(next(i for i, v in enumerate(c) if v != 0))
    return out


def in_lattice(basis: Sequence[Column], x: Sequence[int]) -> bool:
    """Membership test against a basis in Hermite form (forward substitution)."""
    r = list(x)
    done = 0
    for c in basis:
        i = next(i for i, v in enumerate(c) if v != 0)
        if any(r[done:i]):
            return False
        q, rem = divmod(r[i], c[i])
        if rem:
            return False
        _axpy(q, list(c), r)
        done = i + 1
    return not any(r)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[Column]:
    """Basis of ``{v in Z^ncols : A v = 0}`` for the integer matrix ``A``."""
    m = len(rows)
    # augmented columns [A e_j ; e_j]; column ops on the top half are tracked below
    cols = []
    for j in range(ncols):
        top = [int(rows[i][j]) for i in range(m)]
        bottom = [0] * ncols
        bottom[j] = 1
        cols.append(top + bottom)
    k = _eliminate(cols, m)
    return [tuple(c[m:]) for c in cols[k:]]


def smith_form(rows: Sequence[Sequence[int]], nrows: int, ncols: int):
    """Smith normal form ``U A V = D`` with the left transform.

    Returns ``(diag, U)`` where ``diag`` lists the nonzero diagonal entries
    ``d_1 | d_2 | ...`` (all positive) and ``U`` is the unimodular row
    transform as a list of rows.
    """
    M = [[int(v) for v in row] for row in rows]
    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    diag = []

    def row_sub(q, src, dst):
        _axpy(q, M[src], M[dst])
        _axpy(q, U[src], U[dst])

    def col_sub(q, src, dst):
        if q:
            for row in M:
                row[dst] -= q * row[src]

    for t in range(min(nrows, ncols)):
        cand = [(abs(M[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if M[i][j]]
        if not cand:
            break
        _, i0, j0 = min(cand)
        M[t], M[i0] = M[i0], M[t]
        U[t], U[i0] = U[i0], U[t]
        for row in M:
            row[t], row[j0] = row[j0], row[t]
        while True:
            piv = M[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if M[i][t]:
                    row_sub(M[i][t] // piv, t, i)
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if M[t][j]:
                    col_sub(M[t][j] // piv, t, j)
                    if M[t][j]:
                        dirty = True
            if dirty:
                cand = [(abs(M[i][t]), i, t) for i in range(t, nrows) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t, ncols) if M[t][j]]
                _, i0, j0 = min(cand)
                if i0 != t:
                    M[t], M[i0] = M[i0], M[t]
                    U[t], U[i0] = U[i0], U[t]
                if j0 != t:
                    for row in M:
                        row[t], row[j0] = row[j0], row[t]
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if M[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t; the next pass shrinks the pivot
            _axpy(-1, M[bad], M[t])
            _axpy(-1, U[bad], U[t])
        if M[t][t] < 0:
            M[t] = [-v for v in M[t]]
            U[t] = [-v for v in U[t]]
        diag.append(M[t][t])
    return diag, U
