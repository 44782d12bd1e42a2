"""Dense two-phase primal simplex for ``min c x  s.t.  A x = b, x >= 0``.

Tableau method with Dantzig pricing.  After ``stall_limit`` consecutive
pivots without objective progress the solver switches to Bland's rule, which
cannot cycle.  The final basis is refactorised from the original data and the
answer is returned together with a dual certificate; if the certificate does
not check out the solver keeps pivoting or raises, it never returns a
solution it cannot certify.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SimplexError(RuntimeError):
    pass


class InfeasibleError(SimplexError):
    pass


class UnboundedError(SimplexError):
    pass


@dataclass
class SimplexResult:
    x: np.ndarray
    value: float
    duals: np.ndarray
    reduced_costs: np.ndarray
    basis: np.ndarray
    iterations: int
    primal_residual: float

    @property
    def min_reduced_cost(self) -> float:
        return float(np.min(self.reduced_costs)) if self.reduced_costs.size else 0.0


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])


class _Tableau:
    """Rows 0..m-1 hold ``B^-1 [A | b]``; row m holds reduced costs and ``-z``."""

    def __init__(self, T, basis, tol, pivot_tol, stall_limit, max_iter):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.pivot_tol = pivot_tol
        self.stall_limit = stall_limit
        self.max_iter = max_iter
        self.iterations = 0

    def run(self, allowed: np.ndarray) -> None:
        T = self.T
        m = T.shape[0] - 1
        stall = 0
        bland = False
        last_obj = T[m, -1]
        while True:
            if self.iterations >= self.max_iter:
                raise SimplexError(f"iteration limit {self.max_iter} reached")
            rc = T[m, :-1]
            candidates = np.flatnonzero((rc < -self.tol) & allowed)
            if candidates.size == 0:
                return
            if bland:
                col = int(candidates[0])
            else:
                col = int(candidates[np.argmin(rc[candidates])])
            colv = T[:m, col]
            rows = np.flatnonzero(colv > self.pivot_tol)
            if rows.size == 0:
                raise UnboundedError("objective unbounded below")
            ratios = T[rows, -1] / colv[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.tol]
            if bland:
                row = int(ties[np.argmin(self.basis[ties])])
            else:
                row = int(ties[np.argmax(colv[ties])])
            _pivot(T, row, col)
            self.basis[row] = col
            self.iterations += 1
            obj = T[m, -1]
            # row m stores -z, so progress means it grows
            if obj > last_obj + self.tol:
                stall = 0
                bland = False
                last_obj = obj
            else:
                stall += 1
                if stall >= self.stall_limit:
                    bland = True


def simplex(
    c,
    A,
    b,
    tol: float = 1e-9,
    pivot_tol: float = 1e-9,
    stall_limit: int = 50,
    max_iter: int = 100_000,
    max_refactor: int = 5,
) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError(f"inconsistent shapes: c {c.shape}, A {A.shape}, b {b.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise ValueError("non-finite LP data")
    if m == 0:
        if np.any(c < -tol):
            raise UnboundedError("objective unbounded below")
        return SimplexResult(np.zeros(n), 0.0, np.zeros(0), c.copy(), np.zeros(0, dtype=int), 0, 0.0)

    sign = np.where(b < 0, -1.0, 1.0)
    As = A * sign[:, None]
    bs = b * sign

    # phase 1: artificial basis, minimise the sum of artificials
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = As
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = bs
    T[m, :n] = -As.sum(axis=0)
    T[m, -1] = -bs.sum()
    basis = np.arange(n, n + m)
    tab = _Tableau(T, basis, tol, pivot_tol, stall_limit, max_iter)
    tab.run(np.ones(n + m, dtype=bool))
    scale = max(1.0, float(np.max(np.abs(bs))))
    if -T[m, -1] > tol * scale * m:
        raise InfeasibleError(f"phase 1 ended with infeasibility {-T[m, -1]:.3g}")

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = np.ones(m, dtype=bool)
    positions = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] < n:
            continue
        nz = np.flatnonzero(np.abs(T[r, :n]) > 1e-7)
        if nz.size:
            col = int(nz[np.argmax(np.abs(T[r, nz]))])
            _pivot(T, r, col)
            basis[r] = col
        else:
            # the artificial's own constraint is a combination of the others
            keep[basis[r] - n] = False
            positions[r] = False
    rows = np.flatnonzero(keep)
    A_red, b_red = As[rows], bs[rows]
    basis = basis[positions]

    allowed = np.ones(n, dtype=bool)
    iterations = tab.iterations
    for _ in range(max_refactor + 1):
        B = A_red[:, basis]
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            raise SimplexError("basis matrix became singular") from None
        T2 = np.zeros((len(rows) + 1, n + 1))
        T2[:-1, :n] = Binv @ A_red
        T2[:-1, -1] = Binv @ b_red
        T2[:-1, -1][np.abs(T2[:-1, -1]) < 1e-13] = 0.0
        if np.any(T2[:-1, -1] < -tol):
            raise SimplexError("refactorised basis is primal infeasible")
        T2[:-1, -1] = np.maximum(T2[:-1, -1], 0.0)
        y = np.linalg.solve(B.T, c[basis])
        T2[-1, :n] = c - A_red.T @ y
        T2[-1, basis] = 0.0
        T2[-1, -1] = -float(c[basis] @ T2[:-1, -1])
        tab2 = _Tableau(T2, basis, tol, pivot_tol, stall_limit, max_iter - iterations)
        tab2.run(allowed)
        iterations += tab2.iterations
        basis = tab2.basis

        B = A_red[:, basis]
        xB = np.linalg.solve(B, b_red)
        if np.any(xB < -tol):
            continue
        x = np.zeros(n)
        x[basis] = np.maximum(xB, 0.0)
        y_red = np.linalg.solve(B.T, c[basis])
        reduced = c - A_red.T @ y_red
        residual = float(np.max(np.abs(A @ x - b)))
        if residual <= tol and reduced.min() >= -tol:
            duals = np.zeros(m)
            duals[rows] = y_red * sign[rows]
            return SimplexResult(x, float(c @ x), duals, reduced, basis.copy(), iterations, residual)
    raise SimplexError("could not certify an optimal basis")
