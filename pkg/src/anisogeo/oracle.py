"""Independent shortest-path oracle on an integer lattice.

Distances produced by the crystal geometry are cross-checked against a
brute-force competitor: the cheapest way to reach an integer target using
nonnegative combinations of a finite stencil of integer moves, each move
priced by the cost of its vector. Two redundant solvers compute it - a
small linear program over the stencil cone and Dijkstra on a bounded
lattice - and must agree, otherwise the oracle raises instead of lying.

Stencil paths are admissible polylines, so the oracle can only
overestimate the true anisotropic distance; the gap shrinks as the
stencil order grows and vanishes when the optimal staircase directions
are stencil moves.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from .crystal import CrystalContext
from .integrand import Integrand

_SOLVER_AGREEMENT = 1e-6


@dataclass(frozen=True, eq=False)
class Stencil:
    """Finite set of integer moves whose directions positively span the plane.

    Moves are coprime (no redundant multiples) and nonzero. The order-k
    stencil holds every coprime vector with coordinates bounded by k, so
    stencils grow by inclusion as k increases.
    """

    moves: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.moves)
        if m.ndim != 2 or m.shape[1] != 2 or len(m) < 3:
            raise ValueError("a stencil needs at least 3 planar moves")
        if not np.issubdtype(m.dtype, np.integer):
            raise ValueError("stencil moves must be integer vectors")
        if np.any(np.all(m == 0, axis=1)):
            raise ValueError("stencil contains the zero move")
        for a, b in m:
            if math.gcd(abs(int(a)), abs(int(b))) != 1:
                raise ValueError(f"move ({a}, {b}) is a multiple of a shorter move")
        angles = np.sort(np.mod(np.arctan2(m[:, 1], m[:, 0]), 2.0 * np.pi))
        gaps = np.diff(np.append(angles, angles[0] + 2.0 * np.pi))
        if gaps.max() >= np.pi:
            raise ValueError("moves leave an angular gap >= pi; they do not positively span")
        object.__setattr__(self, "moves", m.astype(np.int64))

    @cached_property
    def reach(self) -> int:
        return int(np.abs(self.moves).max())

    @classmethod
    def axis(cls) -> "Stencil":
        return cls(np.array([[1, 0], [0, 1], [-1, 0], [0, -1]]))

    @classmethod
    def order(cls, k: int) -> "Stencil":
        if k < 1:
            raise ValueError("stencil order must be at least 1")
        moves = [
            (a, b)
            for a in range(-k, k + 1)
            for b in range(-k, k + 1)
            if (a, b) != (0, 0) and math.gcd(abs(a), abs(b)) == 1
        ]
        return cls(np.array(moves))


def _move_costs(F: Integrand, moves: np.ndarray) -> np.ndarray:
    return np.array([F(m.astype(float)) for m in moves])


def _cone_program(
    costs: np.ndarray, moves: np.ndarray, target: np.ndarray
) -> tuple[float, np.ndarray]:
    res = linprog(
        c=costs,
        A_eq=moves.T.astype(float),
        b_eq=target.astype(float),
        bounds=[(0.0, None)] * len(moves),
        method="highs",
    )
    if not res.success:
        raise ValueError(f"target {tuple(target)} is outside the stencil's positive span")
    return float(res.fun), np.asarray(res.x)


def _unimodular_scale(coefficients: np.ndarray, moves: np.ndarray) -> int:
    """Smallest target multiplier that makes the optimal combination integral.

    A basic optimum uses at most two moves; scaling the target by the
    absolute determinant of that pair turns the Cramer coefficients into
    integers, so the lattice search can realize the program's optimum
    exactly.
    """
    order = np.argsort(coefficients)[::-1]
    if len(order) < 2 or coefficients[order[1]] <= 1e-9:
        return 1
    a = moves[order[0]]
    b = moves[order[1]]
    det = abs(int(a[0]) * int(b[1]) - int(a[1]) * int(b[0]))
    return max(det, 1)


def _lattice_dijkstra(costs: np.ndarray, moves: np.ndarray, target: np.ndarray) -> float:
    # Optimal stencil paths for convex envelopes never leave the box spanned
    # by the target's cone; twice the target plus the reach is ample.
    bound = 2 * int(np.abs(target).max()) + int(np.abs(moves).max())
    move_list = [(int(a), int(b)) for a, b in moves]
    goal = (int(target[0]), int(target[1]))
    dist: dict[tuple[int, int], float] = {(0, 0): 0.0}
    heap: list[tuple[float, tuple[int, int]]] = [(0.0, (0, 0))]
    while heap:
        d, node = heapq.heappop(heap)
        if node == goal:
            return d
        if d > dist.get(node, math.inf):
            continue
        x, y = node
        for (mx, my), c in zip(move_list, costs):
            nxt = (x + mx, y + my)
            if abs(nxt[0]) > bound or abs(nxt[1]) > bound:
                continue
            nd = d + c
            if nd < dist.get(nxt, math.inf):
                dist[nxt] = nd
                heapq.heappush(heap, (nd, nxt))
    raise ValueError(f"target {goal} unreachable within the lattice bound {bound}")


def oracle_distance(F: Integrand, target, stencil: Stencil) -> float:
    """Cheapest stencil-path cost from the origin to an integer target.

    The minimum runs over nonnegative *real* combinations of moves (every
    such combination is an admissible polyline, so this is the honest
    competitor value) and is solved as a linear program over the stencil
    cone. Dijkstra on a bounded lattice cross-checks it: integer paths can
    only realize integral combinations, so the check runs at the target
    scaled to make the program's optimal combination integral (exact
    agreement expected), or one-sidedly when that scale is impractical.
    Disagreement raises instead of returning an untrustworthy number. The
    result is always an upper bound on the anisotropic distance.
    """
    target = np.asarray(target)
    if target.shape != (2,) or not np.issubdtype(target.dtype, np.integer):
        raise ValueError("oracle targets must be planar integer vectors")
    if np.all(target == 0):
        raise ValueError("oracle target must be nonzero")
    costs = _move_costs(F, stencil.moves)
    lp, coefficients = _cone_program(costs, stencil.moves, target)
    scale = _unimodular_scale(coefficients, stencil.moves)
    if scale * int(np.abs(target).max()) <= 200:
        dj = _lattice_dijkstra(costs, stencil.moves, scale * target) / scale
        if abs(lp - dj) > _SOLVER_AGREEMENT * max(1.0, abs(lp)):
            raise RuntimeError(
                f"oracle solvers disagree at {tuple(target)} (scale {scale}): "
                f"cone program {lp!r}, lattice search {dj!r}"
            )
    else:  # huge determinant: fall back to the relaxation bound
        dj = _lattice_dijkstra(costs, stencil.moves, target)
        if dj < lp - _SOLVER_AGREEMENT * max(1.0, abs(lp)):
            raise RuntimeError(
                f"lattice search undercuts the cone program at {tuple(target)}: "
                f"{dj!r} < {lp!r}"
            )
    return lp


def oracle_convergence(
    ctx: CrystalContext, target, orders: list[int]
) -> list[tuple[int, float]]:
    """Oracle gap (oracle minus true distance) for increasing stencil orders.

    Gaps are nonnegative and nonincreasing because stencils grow by
    inclusion.
    """
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise ValueError("stencil orders must be strictly increasing")
    target = np.asarray(target)
    true_distance = ctx.norm(target.astype(float))
    out = []
    for k in orders:
        gap = oracle_distance(ctx.integrand, target, Stencil.order(k)) - true_distance
        out.append((k, gap))
    return out
