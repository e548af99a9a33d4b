"""Two-phase revised simplex with Bland's rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``.  With Fraction input and ``tol=0``
every step is exact; with floats a tolerance guards the sign tests.  The
explicit basis inverse is updated by elementary row operations, which is
plenty for the few-hundred-variable problems this package produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

FLOAT_TOL = 1e-8

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list | None
    objective: object
    basis: list[int]
    iterations: int


class _Tableau:
    def __init__(self, A, b, tol, one, zero):
        self.m = len(A)
        self.n = len(A[0]) if self.m else 0
        self.tol = tol
        self.one, self.zero = one, zero
        # flip rows so the artificial start is feasible
        self.A = []
        self.b = []
        for row, bi in zip(A, b):
            if bi < 0:
                self.A.append([-v for v in row])
                self.b.append(-bi)
            else:
                self.A.append(list(row))
                self.b.append(bi)
        self.basis = [self.n + i for i in range(self.m)]
        self.Binv = [[one if i == j else zero for j in range(self.m)] for i in range(self.m)]
        self.xB = list(self.b)
        self.iterations = 0

    def column(self, j):
        if j >= self.n:
            return [self.one if i == j - self.n else self.zero for i in range(self.m)]
        return [self.A[i][j] for i in range(self.m)]

    def ftran(self, col):
        return [sum((Bi[k] * col[k] for k in range(self.m) if col[k]), self.zero) for Bi in self.Binv]

    def duals(self, cost):
        cB = [cost(j) for j in self.basis]
        return [sum((cB[i] * self.Binv[i][k] for i in range(self.m) if cB[i]), self.zero) for k in range(self.m)]

    def pivot(self, r, u):
        piv = u[r]
        Br = [v / piv for v in self.Binv[r]]
        xr = self.xB[r] / piv
        for i in range(self.m):
            if i == r or not u[i]:
                continue
            f = u[i]
            self.Binv[i] = [a - f * b for a, b in zip(self.Binv[i], Br)]
            self.xB[i] = self.xB[i] - f * xr
        self.Binv[r] = Br
        self.xB[r] = xr

    def run(self, cost, eligible) -> str:
        tol = self.tol
        while True:
            y = self.duals(cost)
            in_basis = set(self.basis)
            entering = None
            for j in range(self.n + self.m):
                if j in in_basis or not eligible(j):
                    continue
                col = self.column(j)
                d = cost(j) - sum((y[k] * col[k] for k in range(self.m) if col[k]), self.zero)
                if d < -tol:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            u = self.ftran(self.column(entering))
            best = None
            for i in range(self.m):
                if u[i] > tol:
                    ratio = self.xB[i] / u[i]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            r = best[1]
            self.pivot(r, u)
            self.basis[r] = entering
            self.iterations += 1

    def drive_out_artificials(self):
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            for j in range(self.n):
                if j in self.basis:
                    continue
                u = self.ftran(self.column(j))
                if abs(u[r]) > self.tol:
                    self.pivot(r, u)
                    self.basis[r] = j
                    break
            # otherwise the row is redundant; its artificial stays basic at zero


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence, exact: bool = True) -> LPResult:
    """Minimise c.x subject to A x = b, x >= 0."""
    if exact:
        c = [Fraction(v) for v in c]
        A = [[Fraction(v) for v in row] for row in A]
        b = [Fraction(v) for v in b]
        tol, one, zero = Fraction(0), Fraction(1), Fraction(0)
    else:
        c = [float(v) for v in c]
        A = [[float(v) for v in row] for row in A]
        b = [float(v) for v in b]
        tol, one, zero = FLOAT_TOL, 1.0, 0.0
    t = _Tableau(A, b, tol, one, zero)
    n = t.n

    status = t.run(lambda j: one if j >= n else zero, lambda j: True)
    phase1 = sum((t.xB[i] for i in range(t.m) if t.basis[i] >= n), zero)
    if status != OPTIMAL or phase1 > tol:
        return LPResult(INFEASIBLE, None, None, list(t.basis), t.iterations)
    t.drive_out_artificials()

    status = t.run(lambda j: c[j] if j < n else zero, lambda j: j < n)
    if status != OPTIMAL:
        return LPResult(status, None, None, list(t.basis), t.iterations)
    x = [zero] * n
    for i, j in enumerate(t.basis):
        if j < n:
            x[j] = t.xB[i]
    if not exact:
        x = [v if v > 0 else 0.0 for v in x]
    objective = sum((ci * xi for ci, xi in zip(c, x)), zero)
    return LPResult(OPTIMAL, x, objective, list(t.basis), t.iterations)


def feasible(A: Sequence[Sequence], b: Sequence, exact: bool = True) -> list | None:
    """A point x >= 0 with A x = b, or None."""
    res = solve_lp([0] * (len(A[0]) if A else 0), A, b, exact=exact)
    return res.x if res.status == OPTIMAL else None
