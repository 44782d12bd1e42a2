"""Linear relaxation of the linearised quadratic semi-assignment model.

Variables are ``x[p, i]`` (non-hub ``p`` on hub ``i``) and, for each
unordered pair ``p < q``, ``y[p, q][i, j]`` standing for ``x[p, i] x[q, j]``.
Because the hub metric is symmetric the two ordered terms ``w_pq`` and
``w_qp`` share one y-block with weight ``w_pq + w_qp``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from .instance import Instance
from .simplex import SimplexResult, simplex

Pair = Tuple[int, int]


@dataclass
class LpModel:
    c: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    n: int
    h: int
    pairs: List[Pair]

    @property
    def num_vars(self) -> int:
        return self.c.size

    @property
    def num_constraints(self) -> int:
        return self.b_eq.size

    def x_index(self, p: int, i: int) -> int:
        return p * self.h + i

    def y_offset(self, k: int) -> int:
        """First column of the y-block of ``pairs[k]``; laid out row-major in (i, j)."""
        return self.n * self.h + k * self.h * self.h

    def to_text(self) -> str:
        """One line per constraint: ``coef*var ... = rhs``; objective first."""
        def names():
            for p in range(self.n):
                for i in range(self.h):
                    yield f"x_{p + 1}_{i + 1}"
            for p, q in self.pairs:
                for i in range(self.h):
                    for j in range(self.h):
                        yield f"y_{p + 1}_{i + 1}_{q + 1}_{j + 1}"

        var = list(names())

        def terms(row):
            return " ".join(f"{v:+.17g}*{var[k]}" for k, v in enumerate(row) if v != 0)

        lines = ["min: " + terms(self.c)]
        for row, rhs in zip(self.A_eq, self.b_eq):
            lines.append(f"{terms(row)} = {rhs:.17g}")
        return "\n".join(lines) + "\n"


@dataclass
class FractionalSolution:
    x: np.ndarray
    y: Dict[Pair, np.ndarray] = field(default_factory=dict)

    def joint(self, p: int, q: int) -> np.ndarray:
        """``y[p, i, q, j]`` as an h x h matrix for any ordered pair p != q."""
        if p < q:
            return self.y[(p, q)]
        return self.y[(q, p)].T


@dataclass
class ObjectiveSplit:
    w1: float
    w2: float

    @property
    def total(self) -> float:
        return self.w1 + self.w2


@dataclass
class LpSolution:
    """Optimal LRP solution with its value, objective split and certificate."""

    solution: FractionalSolution
    value: float
    split: ObjectiveSplit
    certificate: SimplexResult

    @property
    def x(self) -> np.ndarray:
        return self.solution.x


def _flows(instance: Instance) -> np.ndarray:
    W = instance.flows.copy()
    np.fill_diagonal(W, 0.0)
    return W


def build_lrp(instance: Instance) -> LpModel:
    n, h = instance.n, instance.h
    C = instance.metric()
    W = _flows(instance)
    pairs = list(combinations(range(n), 2))
    hh = h * h
    nvar = n * h + len(pairs) * hh
    ncon = n + 2 * h * len(pairs)

    c = np.zeros(nvar)
    through = W.sum(axis=1) + W.sum(axis=0)
    c[: n * h] = (instance.spoke_costs * through[:, None]).ravel()

    A = np.zeros((ncon, nvar))
    b = np.zeros(ncon)
    for p in range(n):
        A[p, p * h:(p + 1) * h] = 1.0
        b[p] = 1.0
    r = n
    for k, (p, q) in enumerate(pairs):
        off = n * h + k * hh
        c[off:off + hh] = (W[p, q] + W[q, p]) * C.ravel()
        for i in range(h):
            # sum_j y[p,i,q,j] = x[p,i]
            A[r, off + i * h: off + (i + 1) * h] = 1.0
            A[r, p * h + i] = -1.0
            r += 1
        for j in range(h):
            # sum_i y[p,i,q,j] = x[q,j]
            A[r, off + j: off + hh: h] = 1.0
            A[r, q * h + j] = -1.0
            r += 1
    return LpModel(c, A, b, n, h, pairs)


def unpack(model: LpModel, z: np.ndarray) -> FractionalSolution:
    n, h = model.n, model.h
    x = z[: n * h].reshape(n, h).copy()
    y = {pq: z[model.y_offset(k): model.y_offset(k) + h * h].reshape(h, h).copy()
         for k, pq in enumerate(model.pairs)}
    return FractionalSolution(x, y)


def solve_lp(model: LpModel) -> Tuple[FractionalSolution, float]:
    res = simplex(model.c, model.A_eq, model.b_eq)
    return unpack(model, res.x), res.value


def split_objective(instance: Instance, sol: FractionalSolution) -> ObjectiveSplit:
    """Spoke part ``W1`` and hub-arc part ``W2`` of the LRP objective."""
    W = _flows(instance)
    C = instance.metric()
    spoke = np.sum(instance.spoke_costs * sol.x, axis=1)
    w1 = float(spoke @ (W.sum(axis=1) + W.sum(axis=0)))
    w2 = 0.0
    for (p, q), y in sol.y.items():
        w2 += (W[p, q] + W[q, p]) * float(np.sum(C * y))
    return ObjectiveSplit(w1, w2)


def solve_lrp(instance: Instance) -> LpSolution:
    model = build_lrp(instance)
    res = simplex(model.c, model.A_eq, model.b_eq)
    sol = unpack(model, res.x)
    return LpSolution(sol, res.value, split_objective(instance, sol), res)
