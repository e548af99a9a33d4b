"""Exact and floating-point linear algebra on small dense matrices.

Exact routines work on lists of lists of Fractions/ints and use fraction-free
(Bareiss) elimination on integer-scaled rows.  Float routines use numpy SVD.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

FLOAT_RANK_RTOL = 1e-10

_PRIME = (1 << 61) - 1


class SingularSystemError(ValueError):
    """A linear system has no solution (or no unique one where one is needed).

    ``pair`` holds the positions of two coinciding nodes when that is the cause.
    """

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


def _integer_row(row: Sequence) -> list[int]:
    fracs = [Fraction(x) for x in row]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    return [int(f * lcm) for f in fracs]


def bareiss_echelon(A: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Each row is first scaled to integers (this keeps the row space), then
    eliminated with Bareiss' exact-division update.  Returns the integer
    echelon matrix and the pivot columns.
    """
    M = [_integer_row(r) for r in A]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[p], M[r] = M[r], M[p]
        piv = M[r][c]
        row_r = M[r]
        for i in range(r + 1, m):
            row_i = M[i]
            a = row_i[c]
            for j in range(c + 1, n):
                q, rem = divmod(piv * row_i[j] - a * row_r[j], prev)
                assert rem == 0, "Bareiss division not exact"
                row_i[j] = q
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return M, pivots


def rank_exact(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    return len(bareiss_echelon(A)[1])


def _back_substitute(E, pivots, n, free_values: dict[int, Fraction], rhs=None) -> list[Fraction]:
    x = [Fraction(0)] * n
    for c, v in free_values.items():
        x[c] = Fraction(v)
    for r in reversed(range(len(pivots))):
        c = pivots[r]
        row = E[r]
        acc = Fraction(rhs[r]) if rhs is not None else Fraction(0)
        for j in range(c + 1, n):
            if row[j] and x[j]:
                acc -= row[j] * x[j]
        x[c] = acc / row[c]
    return x


def primitive(vec: Sequence[Fraction]) -> list[Fraction]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    ints = _integer_row(vec)
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return [Fraction(0)] * len(ints)
    lead = next(v for v in ints if v)
    sign = 1 if lead > 0 else -1
    return [Fraction(sign * v // g) for v in ints]


def nullspace_exact(A: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, each vector primitive-integer scaled."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    E, pivots = bareiss_echelon(A)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = _back_substitute(E, pivots, n, {f: Fraction(1)})
        basis.append(primitive(x))
    return basis


def solve_exact(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """One exact solution of A x = b with every free variable set to zero."""
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m:
        raise ValueError("right-hand side length mismatch")
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    E, pivots = bareiss_echelon(aug)
    if pivots and pivots[-1] == n:
        raise SingularSystemError("inconsistent linear system")
    rhs = [E[r][n] for r in range(len(pivots))]
    return _back_substitute(E, pivots, n, {}, rhs)


def _mod_vector(row) -> list[int] | None:
    out = []
    for x in row:
        f = Fraction(x)
        if f.denominator % _PRIME == 0:
            return None
        out.append(f.numerator * pow(f.denominator, -1, _PRIME) % _PRIME)
    return out


def _reduce(vec, basis, sub):
    # basis rows are normalised at their lead column and vanish at the lead
    # columns of earlier rows, so one pass in insertion order suffices
    for lead, brow in basis:
        f = vec[lead]
        if f:
            vec = [sub(v, f * b) for v, b in zip(vec, brow)]
    return vec


def select_independent_rows(rows: Sequence[Sequence], target: int) -> list[int]:
    """Greedily pick rows (in order) until ``target`` independent ones are found.

    Independence is tested modulo a large prime first; rows independent mod p
    are independent over the rationals.  When that pass comes up short the
    selection is redone in exact rational arithmetic.  Returns the chosen row
    indices, fewer than ``target`` when the rows do not have that rank.
    """
    chosen: list[int] = []
    basis: list = []
    for idx, row in enumerate(rows):
        if len(chosen) == target:
            return chosen
        vec = _mod_vector(row)
        if vec is None:
            continue
        vec = _reduce(vec, basis, lambda a, b: (a - b) % _PRIME)
        lead = next((j for j, v in enumerate(vec) if v), None)
        if lead is None:
            continue
        inv = pow(vec[lead], -1, _PRIME)
        basis.append((lead, [v * inv % _PRIME for v in vec]))
        chosen.append(idx)
    if len(chosen) == target:
        return chosen
    return _select_exact(rows, target)


def _select_exact(rows, target):
    chosen: list[int] = []
    basis: list = []
    for idx, row in enumerate(rows):
        if len(chosen) == target:
            break
        vec = _reduce([Fraction(x) for x in row], basis, lambda a, b: a - b)
        lead = next((j for j, v in enumerate(vec) if v), None)
        if lead is None:
            continue
        piv = vec[lead]
        basis.append((lead, [v / piv for v in vec]))
        chosen.append(idx)
    return chosen


def solve_dual_vandermonde(nodes: Sequence, rhs: Sequence) -> list:
    """Solve sum_i w_i * nodes[i]**k = rhs[k], k = 0..n-1, by Bjorck-Pereyra.

    O(n^2) and division-only-by-node-differences, so it is exact on Fractions.
    Raises SingularSystemError naming a duplicate pair of nodes.
    """
    n = len(nodes)
    if len(rhs) != n:
        raise ValueError("need as many moments as nodes")
    seen = {}
    for i, x in enumerate(nodes):
        if x in seen:
            raise SingularSystemError(f"duplicate nodes at positions {seen[x]} and {i} (value {x})", (seen[x], i))
        seen[x] = i
    b = list(rhs)
    for k in range(n - 1):
        for i in range(n - 1, k, -1):
            b[i] = b[i] - nodes[k] * b[i - 1]
    for k in range(n - 2, -1, -1):
        for i in range(k + 1, n):
            b[i] = b[i] / (nodes[i] - nodes[i - k - 1])
        for i in range(k, n - 1):
            b[i] = b[i] - b[i + 1]
    return b


# -- float --------------------------------------------------------------------


def rank_float(A, rtol: float = FLOAT_RANK_RTOL) -> tuple[int, np.ndarray, np.ndarray]:
    """Numerical rank by singular values with cutoff rtol * sigma_max.

    Returns (rank, singular values, right singular vectors as rows).
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0, np.zeros(0), np.eye(A.shape[1] if A.ndim == 2 else 0)
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    if s[0] == 0:
        return 0, s, vt
    return int(np.sum(s > rtol * s[0])), s, vt


def least_norm_solve(A, b, refine: int = 2) -> np.ndarray:
    """Minimum-2-norm solution of the underdetermined A x = b with refinement steps."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x = np.linalg.lstsq(A, b, rcond=None)[0]
    for _ in range(refine):
        r = b - A @ x
        x = x + np.linalg.lstsq(A, r, rcond=None)[0]
    return x
