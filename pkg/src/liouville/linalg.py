"""Exact linear algebra over K, Q and Z.

Matrices are lists of rows.  K-matrices hold :class:`Scalar` entries,
rational matrices hold :class:`Fraction` entries and integer matrices hold
Python ints, so nothing ever overflows.  Vectors returned as bases are
tuples (columns).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .scalar import MultiQuadraticField, RationalField, Scalar, TranscendentalField, _frac

# ---------------------------------------------------------------- generic elimination
# Works for any exact field whose elements support ``== 0``, + - * /.


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def _zero_like(x):
    return x - x


def _one_like(x):
    return x * 0 + 1


def kernel_basis(A: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of {x : Ax = 0}, one vector per free column with that entry 1."""
    if not A:
        raise ValueError("kernel_basis needs at least one row")
    if ncols is None:
        ncols = len(A[0])
    if not ncols:
        return []
    R, pivots = rref(A)
    sample = A[0][0]
    zero, one = _zero_like(sample), _one_like(sample)
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        x = [zero] * ncols
        x[f] = one
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(A: Sequence[Sequence], y: Sequence):
    """Some x with Ax = y (free variables set to 0), or None if inconsistent."""
    if not A:
        return None if any(v != 0 for v in y) else ()
    ncols = len(A[0])
    aug = [list(row) + [v] for row, v in zip(A, y)]
    R, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    zero = _zero_like(A[0][0] if ncols else y[0])
    x = [zero] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return tuple(x)


def echelon_basis(vectors: Sequence[Sequence]) -> tuple[list[tuple], list[int]]:
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    rows = [list(v) for v in vectors]
    if not rows:
        return [], []
    R, pivots = rref(rows)
    return [tuple(r) for r in R], pivots


def matvec(A: Sequence[Sequence], x: Sequence):
    return tuple(sum((a * b for a, b in zip(row, x)), _zero_like(row[0]) if row else 0) for row in A)


def columns_to_rows(cols: Sequence[Sequence], nrows: int) -> list[list]:
    return [[c[i] for c in cols] for i in range(nrows)]


# ---------------------------------------------------------------- K -> Q reduction


def orthogonality_system(vs: Sequence[Sequence[Scalar]]) -> list[list[Fraction]]:
    """Rational matrix R with: m in Q^n is orthogonal to every v in ``vs`` iff Rm = 0."""
    rows: list[list[Fraction]] = []
    for v in vs:
        if not v:
            continue
        field = v[0].field
        if isinstance(field, RationalField):
            rows.append([x.data for x in v])
        elif isinstance(field, MultiQuadraticField):
            for S in range(field.size):
                row = [x.data[S] for x in v]
                if any(row):
                    rows.append(row)
        elif isinstance(field, TranscendentalField):
            common = field.K.ring.one
            for x in v:
                common = common.lcm(x.data.denom)
            polys = [x.data.numer * common.exquo(x.data.denom) for x in v]
            monoms = sorted({mono for p in polys for mono in p.keys()})
            for mono in monoms:
                rows.append([_frac(p[mono]) if mono in p else Fraction(0) for p in polys])
        else:
            raise TypeError(f"unsupported field {field!r}")
    return rows


# ---------------------------------------------------------------- integer matrices


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(ncols)] for i in range(len(A))]


def transpose(A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def det(A: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in A]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _col_combine(M, i, j, a, b, c, d):
    # col_i <- a*col_i + b*col_j ; col_j <- c*col_i + d*col_j
    for row in M:
        x, y = row[i], row[j]
        row[i] = a * x + b * y
        row[j] = c * x + d * y


def hnf(A: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style Hermite normal form: A U = H.

    H is lower-triangular in staircase form with positive pivots, the zero
    columns come last, and every entry left of a pivot lies in [0, pivot).
    """
    n = len(A[0]) if A else (ncols or 0)
    H = [[int(x) for x in row] for row in A]
    U = identity(n)
    k = 0
    for i in range(len(H)):
        if k == n:
            break
        row = H[i]
        for j in range(k + 1, n):
            if row[j] == 0:
                continue
            if row[k] == 0:
                for M in (H, U):
                    for r in M:
                        r[k], r[j] = r[j], r[k]
                continue
            a, b = row[k], row[j]
            g, s, t = xgcd(a, b)
            for M in (H, U):
                _col_combine(M, k, j, s, t, -b // g, a // g)
        if row[k] == 0:
            continue
        if row[k] < 0:
            for M in (H, U):
                for r in M:
                    r[k] = -r[k]
        p = row[k]
        for j in range(k):
            q = row[j] // p
            if q:
                for M in (H, U):
                    for r in M:
                        r[j] -= q * r[k]
        k += 1
    return H, U


def snf(A: Sequence[Sequence[int]], ncols: int | None = None):
    """Smith normal form: U A V = S with d_1 | d_2 | ... on the diagonal."""
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    S = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        for M in (S, U):
            M[i], M[j] = M[j], M[i]

    def swap_cols(i, j):
        for M in (S, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not nz:
                return S, U, V
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                q = S[i][t] // p
                if q:
                    for M in (S, U):
                        M[i] = [x - q * y for x, y in zip(M[i], M[t])]
                clean &= S[i][t] == 0
            for j in range(t + 1, n):
                q = S[t][j] // p
                if q:
                    for r in S:
                        r[j] -= q * r[t]
                    for r in V:
                        r[j] -= q * r[t]
                clean &= S[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is None:
                break
            for M in (S, U):
                M[t] = [x + y for x, y in zip(M[t], M[bad])]
        if S[t][t] < 0:
            for M in (S, U):
                M[t] = [-x for x in M[t]]
    return S, U, V


def clear_denominators(row: Sequence[Fraction]) -> list[int]:
    den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
    return [int(Fraction(x) * den) for x in row]


def lattice_hnf_basis(cols: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Canonical HNF basis of the Z-span of integer columns."""
    if not cols:
        return []
    H, _ = hnf(columns_to_rows(cols, dim))
    return [c for c in (tuple(H[i][j] for i in range(dim)) for j in range(len(cols))) if any(c)]


def integer_kernel(R: Sequence[Sequence[Fraction]], n: int | None = None) -> list[tuple[int, ...]]:
    """Z-basis (HNF-normalized) of the saturated lattice {m in Z^n : Rm = 0}."""
    if n is None:
        n = len(R[0])
    rows = [clear_denominators(r) for r in R if any(r)]
    if not rows:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    H, U = hnf(rows)
    kernel = [tuple(U[i][j] for i in range(n)) for j in range(n) if all(H[r][j] == 0 for r in range(len(H)))]
    return lattice_hnf_basis(kernel, n)


def lattice_member(B: Sequence[Sequence], x: Sequence) -> bool:
    """True iff x = sum n_i B_i with integer n_i (B given as columns)."""
    if not B:
        return all(Fraction(v) == 0 for v in x)
    A = columns_to_rows([[Fraction(v) for v in col] for col in B], len(x))
    sol = solve(A, [Fraction(v) for v in x])
    return sol is not None and all(Fraction(c).denominator == 1 for c in sol)


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
