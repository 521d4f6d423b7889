"""Dense bounded-variable primal simplex (two phases, full tableau).

Every row ``a x (<=|>=|=) b`` gets a slack ``s`` with ``a x + s = b`` and
bounds ``[0, inf)``, ``(-inf, 0]`` or ``[0, 0]``.  Rows whose slack cannot
absorb the starting residual get an artificial variable; phase one drives
those to zero.  Nonbasic variables always sit at a finite bound.

Pricing is Dantzig's rule; after ``10 * n_vars`` consecutive degenerate
pivots it switches to Bland's rule until a nondegenerate step occurs.

``exact=True`` runs the same code on ``Fraction`` entries (object arrays,
zero tolerances); use it to certify small relaxations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

OPTIMAL, INFEASIBLE, UNBOUNDED = "Optimal", "Infeasible", "Unbounded"


class NumericalFailure(RuntimeError):
    """Float arithmetic broke down; rerun with ``exact=True``."""


@dataclass
class SimplexResult:
    status: str
    objective: Optional[float]
    x: Optional[np.ndarray]
    duals: Optional[np.ndarray]
    iterations: int
    dual_objective: Optional[float] = None
    primal_residual: float = 0.0
    cs_residual: float = 0.0
    reduced_costs: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def duality_gap(self) -> float:
        return abs(self.objective - self.dual_objective)


def _is_inf(v) -> bool:
    return v is None or (isinstance(v, float) and np.isinf(v))


def solve_bounded(c: Sequence, A, senses: Sequence[str], b: Sequence,
                  lower: Sequence, upper: Sequence, exact: bool = False,
                  max_iter: Optional[int] = None) -> SimplexResult:
    """Minimise ``c x`` s.t. ``A x (senses) b`` and ``lower <= x <= upper``.

    ``None`` or an infinite float in ``upper`` means no upper bound; lower
    bounds must be finite.
    """
    return _Simplex(c, A, senses, b, lower, upper, exact, max_iter).run()


class _Simplex:
    def __init__(self, c, A, senses, b, lower, upper, exact, max_iter):
        self.exact = exact
        dt = object if exact else float
        conv = Fraction if exact else float
        self.dt = dt

        def arr(seq):
            return np.array([conv(v) for v in seq], dtype=dt)

        n = len(c)
        m = len(b)
        self.m, self.n = m, n
        if exact:
            A = np.array([[Fraction(v) for v in row] for row in A], dtype=object).reshape(m, n)
        else:
            A = np.asarray(A, dtype=float).reshape(m, n)
        if any(_is_inf(v) for v in lower):
            raise ValueError("variables need a finite lower bound")
        b = arr(b)

        # bounds as value arrays plus finiteness flags; slacks follow structurals
        has_lo = [True] * n
        has_up = [not _is_inf(v) for v in upper]
        lo = list(lower)
        up = [0 if _is_inf(v) else v for v in upper]
        for sense in senses:
            if sense not in ("<=", ">=", "="):
                raise ValueError(f"bad sense {sense!r}")
            has_lo.append(sense != ">=")
            has_up.append(sense != "<=")
            lo.append(0)
            up.append(0)

        x0 = arr(lo[:n])
        resid = b - A @ x0 if m else b
        head, coef, art_rows = [], [], []
        for r in range(m):
            s = resid[r]
            if (not has_lo[n + r] or s >= 0) and (not has_up[n + r] or s <= 0):
                head.append(n + r)
                coef.append(1)
            else:
                art_rows.append(r)
                head.append(n + m + len(art_rows) - 1)
                coef.append(1 if s > 0 else -1)
        k = len(art_rows)
        N = n + m + k
        self.N, self.art_start = N, n + m
        full = np.zeros((m, N), dtype=dt)
        if exact:
            full[:] = Fraction(0)
        full[:, :n] = A
        for r in range(m):
            full[r, n + r] = conv(1)
        for t, r in enumerate(art_rows):
            full[r, n + m + t] = conv(coef[r])
        self.A_full = full
        self.b = b
        self.has_lo = np.array(has_lo + [True] * k, dtype=bool)
        self.has_up = np.array(has_up + [False] * k, dtype=bool)
        self.lo = arr(lo + [0] * k)
        self.up = arr(up + [0] * k)

        self.x = arr([0] * N)
        self.x[:n] = x0
        for r in range(m):
            self.x[head[r]] = resid[r] / coef[r]
        self.at_upper = np.zeros(N, dtype=bool)
        for r in range(m):
            if head[r] != n + r and senses[r] == ">=":
                self.at_upper[n + r] = True   # slack of a >= row rests at its upper bound 0
        self.head = np.array(head, dtype=int)
        self.init_cols = self.head.copy()
        self.init_coef = arr(coef)
        self.T = full / self.init_coef[:, None] if m else full.copy()
        self.basic = np.zeros(N, dtype=bool)
        self.basic[self.head] = True
        self.c = arr(list(c) + [0] * (N - n))
        self.tol = 0 if exact else 1e-9
        self.piv_tol = 0 if exact else 1e-9
        self.iterations = 0
        self.max_iter = max_iter or (50 * (m + N) + 1000)
        self.bland_after = 10 * max(n, 1)

    # -- linear algebra helpers -----------------------------------------
    def _binv(self):
        return self.T[:, self.init_cols] / self.init_coef[None, :]

    def _recompute_basics(self):
        nb = ~self.basic
        rhs = self.b - self.A_full[:, nb] @ self.x[nb]
        self.x[self.head] = self._binv() @ rhs

    def _pivot(self, r, q):
        T = self.T
        T[r, :] = T[r, :] / T[r, q]
        colq = T[:, q].copy()
        colq[r] = 0
        # tableau rows and columns are mostly sparse: update only the touched block
        rows = np.flatnonzero(colq != 0)
        if rows.size:
            cols = np.flatnonzero(T[r, :] != 0)
            if rows.size * cols.size * 4 > T.size:
                T -= np.outer(colq, T[r, :])
            else:
                block = np.ix_(rows, cols)
                T[block] -= np.outer(colq[rows], T[r, cols])
        out = int(self.head[r])
        self.basic[out] = False
        self.basic[q] = True
        self.head[r] = q
        return out

    # -- main loop --------------------------------------------------------
    def _iterate(self, cost):
        d = cost - cost[self.head] @ self.T
        degenerate = 0
        tol, ptol = self.tol, self.piv_tol
        x = self.x
        fixed = self.has_lo & self.has_up & (self.lo == self.up)
        while True:
            if self.iterations >= self.max_iter:
                raise NumericalFailure("iteration limit reached")
            movable = ~self.basic & ~fixed
            up_move = movable & ~self.at_upper & (d < -tol)
            down_move = movable & self.at_upper & (d > tol)
            cand = np.flatnonzero(up_move | down_move)
            if cand.size == 0:
                return d
            use_bland = degenerate >= self.bland_after
            if use_bland:
                q = int(cand[0])
            else:
                q = int(cand[int(np.argmax(np.abs(d[cand])))])
            direction = -1 if self.at_upper[q] else 1
            col = self.T[:, q] * direction
            hb = self.head
            xb = x[hb]
            pos = np.flatnonzero((col > ptol) & self.has_lo[hb])
            neg = np.flatnonzero((col < -ptol) & self.has_up[hb])
            rows = np.concatenate([pos, neg])
            theta = None
            if rows.size:
                t = np.concatenate([(xb[pos] - self.lo[hb[pos]]) / col[pos],
                                    (self.up[hb[neg]] - xb[neg]) / (-col[neg])])
                t = np.where(t < 0, t * 0, t)
                theta = t.min()
                ties = rows[t <= theta + tol]
                if use_bland:
                    leave = int(ties[np.argmin(hb[ties])])
                else:
                    leave = int(ties[np.argmax(np.abs(col[ties]))])
            span = self.up[q] - self.lo[q] if self.has_up[q] and self.has_lo[q] else None
            if theta is None and span is None:
                raise _Unbounded()
            self.iterations += 1
            if span is not None and (theta is None or span <= theta):
                x[hb] = xb - span * col
                x[q] = self.up[q] if direction > 0 else self.lo[q]
                self.at_upper[q] = direction > 0
                degenerate = 0 if span > tol else degenerate + 1
                continue
            if not self.exact and abs(self.T[leave, q]) < 1e-11:
                raise NumericalFailure("pivot element too small")
            x[hb] = xb - theta * col
            x[q] = x[q] + direction * theta
            to_upper = bool(col[leave] < 0)
            out_var = int(hb[leave])
            x[out_var] = self.up[out_var] if to_upper else self.lo[out_var]
            self._pivot(leave, q)
            self.at_upper[out_var] = to_upper
            self.at_upper[q] = False
            d = d - d[q] * self.T[leave, :]
            degenerate = 0 if theta > tol else degenerate + 1

    def run(self) -> SimplexResult:
        try:
            if self.N > self.art_start:
                c1 = np.array([0] * self.art_start + [1] * (self.N - self.art_start), dtype=self.dt)
                if self.exact:
                    c1 = np.array([Fraction(v) for v in c1], dtype=object)
                self._iterate(c1)
                if not self.exact:
                    self._recompute_basics()
                infeas = sum(self.x[self.art_start:])
                scale = 1 + max((abs(v) for v in self.b), default=0)
                if infeas > (0 if self.exact else 1e-7 * scale):
                    return SimplexResult(INFEASIBLE, None, None, None, self.iterations)
                self._drive_out_artificials()
                self.has_up[self.art_start:] = True  # artificials are now fixed at zero
                for j in range(self.art_start, self.N):
                    if not self.basic[j]:
                        self.x[j] = self.lo[j]
            self._iterate(self.c)
        except _Unbounded:
            return SimplexResult(UNBOUNDED, None, None, None, self.iterations)
        if not self.exact:
            self._recompute_basics()
        return self._finish()

    def _drive_out_artificials(self):
        for r in range(self.m):
            if self.head[r] < self.art_start:
                continue
            row = self.T[r, :self.art_start]
            cand = np.flatnonzero(~self.basic[:self.art_start] & (np.abs(row) > self.piv_tol))
            if cand.size == 0:
                continue  # redundant row: the artificial stays basic at zero
            q = int(cand[int(np.argmax(np.abs(row[cand])))])
            self._pivot(r, q)  # degenerate: values unchanged
            self.iterations += 1

    def _finish(self) -> SimplexResult:
        n, m = self.n, self.m
        x, A = self.x, self.A_full
        nm = n + m
        obj = self.c[:n] @ x[:n]
        y = self.c[self.head] @ self._binv()
        d = self.c[:nm] - A[:, :nm].T @ y
        dual_obj = self.b @ y
        cs = 0
        for j in range(nm):
            dj = d[j]
            if dj > self.tol:
                if not self.has_lo[j]:
                    dual_obj = -np.inf
                    continue
                dual_obj += dj * self.lo[j]
                cs += dj * (x[j] - self.lo[j])
            elif dj < -self.tol:
                if not self.has_up[j]:
                    dual_obj = -np.inf
                    continue
                dual_obj += dj * self.up[j]
                cs += -dj * (self.up[j] - x[j])
        res = A[:, :nm] @ x[:nm] - self.b
        primal_res = max((abs(v) for v in res), default=0)
        viol_lo = [self.lo[j] - x[j] for j in range(nm) if self.has_lo[j]]
        viol_up = [x[j] - self.up[j] for j in range(nm) if self.has_up[j]]
        primal_res = max([primal_res] + viol_lo + viol_up)
        if not self.exact:
            if primal_res > 1e-6:
                raise NumericalFailure(f"primal residual {primal_res:.3e}")
            obj, dual_obj = float(obj), float(dual_obj)
            primal_res, cs = float(primal_res), float(cs)
        return SimplexResult(OPTIMAL, obj, x[:n].copy(), y, self.iterations, dual_obj,
                             primal_res, cs, d)


class _Unbounded(Exception):
    pass
