"""Directional cost functions and their sphere-sampled transforms.

A directional cost F assigns a positive weight to every direction and is
extended 1-homogeneously: F(x) = |x| * F(x/|x|), F(0) = 0. Five concrete
families are provided (p-norms, constants, crystalline maxima of linear
forms, angular tables, and costs with isolated downward dips), together
with the four transforms that drive the rest of the package:

* ``wulff_transform``    W(F)(v) = min_w F(w) / <v, w>   over <v, w> > 0
* ``inversion_transform``  I(F) = 1 / F
* ``support_transform``  A(G)(v) = max_w G(w) * <v, w>
* ``convex_envelope``    D(F) = A(W(F)), the largest convex 1-homogeneous
  minorant of F.

Extrema over the sphere are realized as extrema over a finite
:class:`SphereGrid`; every scanned value therefore carries an error of
order ``resolution * max F / min F``. Costs may declare
``special_directions`` (facet normals, dip directions, table samples):
these are always appended to the scanned direction set so that flat and
dipped features are resolved exactly rather than at grid accuracy.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .planar import convex_hull_ccw, edge_normals_and_offsets

TWO_PI = 2.0 * math.pi

# Directions closer than this (in Euclidean distance on the sphere) are
# treated as identical; dips have zero angular width at any usable grid.
DIRECTION_MATCH_TOL = 1e-12


def unit(x: np.ndarray) -> np.ndarray:
    """x / |x|, rejecting the zero vector."""
    x = np.asarray(x, dtype=float)
    n = float(np.linalg.norm(x))
    if n <= 0.0:
        raise ValueError("zero vector has no direction")
    return x / n


def angle_of(x) -> float:
    """Planar angle in [0, 2*pi)."""
    x = np.asarray(x, dtype=float)
    return float(np.mod(math.atan2(x[1], x[0]), TWO_PI))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Finite set of unit directions used for all sup/inf scans.

    Planar grids are equispaced angles (strictly increasing in [0, 2*pi));
    in dimension 3 a Fibonacci point set is used. ``resolution`` is the
    angular spacing in radians.
    """

    directions: np.ndarray
    resolution: float

    def __post_init__(self) -> None:
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim != 2 or dirs.shape[0] < 4 or dirs.shape[1] < 2:
            raise ValueError("grid needs at least 4 directions of dimension >= 2")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("grid directions must be unit vectors (tol 1e-12)")
        if self.resolution <= 0.0:
            raise ValueError("resolution must be positive")
        if dirs.shape[1] == 2:
            ang = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), TWO_PI)
            if np.any(np.diff(ang) <= 0.0):
                raise ValueError("planar grid angles must be strictly increasing")
        object.__setattr__(self, "directions", dirs)

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def size(self) -> int:
        return self.directions.shape[0]

    @cached_property
    def angles(self) -> np.ndarray:
        if self.dim != 2:
            raise ValueError("angles are defined for planar grids only")
        return np.mod(np.arctan2(self.directions[:, 1], self.directions[:, 0]), TWO_PI)

    @classmethod
    def planar(cls, count: int = 720) -> "SphereGrid":
        """Equispaced planar grid; angle 0 (the +x axis) is always included."""
        if not 8 <= count <= 20000:
            raise ValueError("planar grid size must be between 8 and 20000")
        angles = np.arange(count) * (TWO_PI / count)
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
        # cos/sin of multiples never stray from the unit circle, but pin the
        # cardinal directions exactly so axis-aligned features are exact.
        for k, d in ((0, (1.0, 0.0)), (1, (0.0, 1.0)), (2, (-1.0, 0.0)), (3, (0.0, -1.0))):
            idx = k * count // 4
            if 4 * idx == k * count:
                dirs[idx] = d
        return cls(dirs, TWO_PI / count)

    @classmethod
    def fibonacci(cls, count: int = 1024) -> "SphereGrid":
        """Quasi-uniform grid on the 2-sphere (dimension 3)."""
        if count < 16:
            raise ValueError("fibonacci grid needs at least 16 points")
        i = np.arange(count)
        z = 1.0 - (2.0 * i + 1.0) / count
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = i * math.pi * (3.0 - math.sqrt(5.0))
        dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        return cls(dirs, 2.0 * math.sqrt(math.pi / count))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A positive function sampled on a sphere grid, extended 1-homogeneously.

    Off-grid unit directions are evaluated by periodic linear interpolation
    in angle (planar grids) or by the nearest grid direction otherwise.
    """

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.size,):
            raise ValueError("one value per grid direction required")
        object.__setattr__(self, "values", vals)

    def unit_value(self, u) -> float:
        u = np.asarray(u, dtype=float)
        if self.grid.dim == 2:
            theta = angle_of(u)
            return float(np.interp(theta, self.grid.angles, self.values, period=TWO_PI))
        return float(self.values[int(np.argmax(self.grid.directions @ u))])

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        n = float(np.linalg.norm(x))
        if n == 0.0:
            return 0.0
        return n * self.unit_value(x / n)

    def max(self) -> float:
        return float(self.values.max())

    def min(self) -> float:
        return float(self.values.min())


class Integrand(ABC):
    """Positive 1-homogeneous directional cost.

    Subclasses define the value on unit directions; evaluation at arbitrary
    points scales that value by the Euclidean norm, which makes
    1-homogeneity hold by construction. Construction validates positivity,
    so evaluation never fails.
    """

    kind: str = "abstract"

    def __init__(self, dim: int) -> None:
        if dim < 2:
            raise ValueError("dimension must be at least 2")
        self.dim = int(dim)

    @abstractmethod
    def unit_value(self, u: np.ndarray) -> float:
        """Cost of a unit direction."""

    def values_on(self, dirs: np.ndarray) -> np.ndarray:
        """Vectorized cost of an array of unit directions."""
        return np.array([self.unit_value(d) for d in np.asarray(dirs, dtype=float)])

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a vector of dimension {self.dim}")
        n = float(np.linalg.norm(x))
        if n == 0.0:
            return 0.0
        return n * self.unit_value(x / n)

    @property
    def special_directions(self) -> np.ndarray:
        """Directions that sup/inf scans must include to be exact (may be empty)."""
        return np.zeros((0, self.dim))

    @property
    def is_convex(self) -> bool:
        """True only when convexity is guaranteed by construction."""
        return False

    def contact_point(self, v: np.ndarray) -> np.ndarray | None:
        """A crystal point x with <v, x> = F(v), when known in closed form."""
        return None

    def to_spec(self) -> dict:
        raise NotImplementedError(f"{self.kind} costs have no file representation")

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}(dim={self.dim})"


class PNorm(Integrand):
    """F(x) = ||x||_p for p >= 1 (math.inf allowed). Convex."""

    kind = "pnorm"

    def __init__(self, p: float, dim: int = 2) -> None:
        super().__init__(dim)
        if not (p >= 1.0):
            raise ValueError("p-norm exponent must satisfy p >= 1")
        self.p = float(p)

    def unit_value(self, u) -> float:
        return float(self._norm(np.asarray(u, dtype=float)[None, :])[0])

    def values_on(self, dirs) -> np.ndarray:
        return self._norm(np.asarray(dirs, dtype=float))

    def _norm(self, x: np.ndarray) -> np.ndarray:
        a = np.abs(x)
        if math.isinf(self.p):
            return a.max(axis=1)
        if self.p == 1.0:
            return a.sum(axis=1)
        return (a ** self.p).sum(axis=1) ** (1.0 / self.p)

    @property
    def is_convex(self) -> bool:
        return True

    @property
    def special_directions(self) -> np.ndarray:
        # Facet normals of the crystal: axes for p = 1 (a cube), diagonal
        # sign patterns for p = inf (a cross-polytope). Smooth p have none.
        if self.p == 1.0:
            eye = np.eye(self.dim)
            return np.vstack([eye, -eye])
        if math.isinf(self.p):
            pats = np.array(list(itertools.product((-1.0, 1.0), repeat=self.dim)))
            return pats / math.sqrt(self.dim)
        return np.zeros((0, self.dim))

    def contact_point(self, v) -> np.ndarray | None:
        if self.p == 1.0 or math.isinf(self.p):
            return None  # polygonal crystal faces are exact already
        v = np.asarray(v, dtype=float)
        n = self._norm(v[None, :])[0]
        if n == 0.0:
            return None
        # Gradient of the p-norm; Euler's relation gives <v, grad> = F(v).
        return np.sign(v) * np.abs(v) ** (self.p - 1.0) / n ** (self.p - 1.0)

    def to_spec(self) -> dict:
        return {"kind": "pnorm", "dimension": self.dim, "p": self.p}


class Constant(Integrand):
    """F(x) = c * |x| for a constant c > 0 (isotropic). Convex."""

    kind = "constant"

    def __init__(self, value: float = 1.0, dim: int = 2) -> None:
        super().__init__(dim)
        if value <= 0.0:
            raise ValueError("constant cost must be positive")
        self.value = float(value)

    def unit_value(self, u) -> float:
        return self.value

    def values_on(self, dirs) -> np.ndarray:
        return np.full(len(dirs), self.value)

    @property
    def is_convex(self) -> bool:
        return True

    def contact_point(self, v) -> np.ndarray | None:
        return self.value * unit(v)

    def to_spec(self) -> dict:
        return {"kind": "constant", "dimension": self.dim, "c": self.value}


class Crystalline(Integrand):
    """F(x) = max_i w_i * <x, u_i> over a finite facet list. Convex.

    The scaled directions ``w_i * u_i`` must positively span the space,
    otherwise F would vanish somewhere; construction rejects such lists.
    """

    kind = "crystalline"

    def __init__(self, facets, dim: int = 2) -> None:
        super().__init__(dim)
        scaled = []
        for direction, weight in facets:
            if weight <= 0.0:
                raise ValueError("facet weights must be positive")
            scaled.append(float(weight) * unit(np.asarray(direction, dtype=float)))
        self.generators = np.array(scaled)
        if self.generators.shape[0] < dim + 1 or self.generators.shape[1] != dim:
            raise ValueError("need at least dim+1 facets of the stated dimension")
        self._validate_positive()

    def _validate_positive(self) -> None:
        if self.dim == 2:
            ang = np.sort(np.mod(np.arctan2(self.generators[:, 1], self.generators[:, 0]), TWO_PI))
            gaps = np.diff(np.append(ang, ang[0] + TWO_PI))
            if gaps.max() >= math.pi - 1e-9:
                raise ValueError("facet directions leave an angular gap >= pi; cost not positive")
        else:
            probe = np.random.default_rng(0).normal(size=(4096, self.dim))
            probe /= np.linalg.norm(probe, axis=1)[:, None]
            if (probe @ self.generators.T).max(axis=1).min() <= 0.0:
                raise ValueError("facet directions do not positively span; cost not positive")

    def unit_value(self, u) -> float:
        return float((self.generators @ np.asarray(u, dtype=float)).max())

    def values_on(self, dirs) -> np.ndarray:
        return (np.asarray(dirs, dtype=float) @ self.generators.T).max(axis=1)

    @property
    def is_convex(self) -> bool:
        return True

    @cached_property
    def special_directions(self) -> np.ndarray:
        # The crystal equals the hull of the generators; its facet normals
        # (hull edge normals in 2D) are where the halfplane scan must be exact.
        if self.dim != 2:
            return self.generators / np.linalg.norm(self.generators, axis=1)[:, None]
        hull = convex_hull_ccw(self.generators)
        normals, _ = edge_normals_and_offsets(hull)
        return normals

    def to_spec(self) -> dict:
        return {
            "kind": "crystalline",
            "dimension": self.dim,
            "facets": [
                {"direction": list(unit(g)), "weight": float(np.linalg.norm(g))}
                for g in self.generators
            ],
        }


class AngularTable(Integrand):
    """Planar cost sampled at angles, linearly interpolated in between.

    Linear interpolation keeps the cost continuous (hence lower
    semicontinuous); convexity is not guaranteed and is not claimed.
    """

    kind = "table"

    def __init__(self, angles, values, dim: int = 2) -> None:
        if dim != 2:
            raise ValueError("table costs are planar only")
        super().__init__(dim)
        ang = np.asarray(angles, dtype=float)
        vals = np.asarray(values, dtype=float)
        if ang.ndim != 1 or ang.shape != vals.shape or len(ang) < 3:
            raise ValueError("need matching angle/value arrays with at least 3 samples")
        if np.any(ang < 0.0) or np.any(ang >= TWO_PI) or np.any(np.diff(ang) <= 0.0):
            raise ValueError("angles must be strictly increasing within [0, 2*pi)")
        if np.any(vals <= 0.0):
            raise ValueError("table values must be positive")
        self.sample_angles = ang
        self.sample_values = vals

    def unit_value(self, u) -> float:
        return float(np.interp(angle_of(u), self.sample_angles, self.sample_values, period=TWO_PI))

    def values_on(self, dirs) -> np.ndarray:
        dirs = np.asarray(dirs, dtype=float)
        theta = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), TWO_PI)
        return np.interp(theta, self.sample_angles, self.sample_values, period=TWO_PI)

    @property
    def special_directions(self) -> np.ndarray:
        return np.column_stack([np.cos(self.sample_angles), np.sin(self.sample_angles)])

    def to_spec(self) -> dict:
        return {
            "kind": "table",
            "dimension": 2,
            "interpolation": "linear",
            "samples": [
                {"angle": float(a), "value": float(v)}
                for a, v in zip(self.sample_angles, self.sample_values)
            ],
        }


class Dip(Integrand):
    """A base cost lowered at finitely many directions (zero angular width).

    The pointwise minimum with a downward spike is the canonical lower
    semicontinuous non-convex family; an upward spike would not be lower
    semicontinuous and is rejected (dip values must not exceed the base).
    """

    kind = "dip"

    def __init__(self, base: Integrand, dips) -> None:
        super().__init__(base.dim)
        self.base = base
        cleaned = []
        for direction, value in dips:
            d = unit(np.asarray(direction, dtype=float))
            if value <= 0.0:
                raise ValueError("dip values must be positive")
            if value > base.unit_value(d) + 1e-12:
                raise ValueError("dip value exceeds the base cost; not a dip")
            cleaned.append((d, float(value)))
        if not cleaned:
            raise ValueError("dip cost requires at least one dip")
        self.dips = cleaned

    def unit_value(self, u) -> float:
        u = np.asarray(u, dtype=float)
        val = self.base.unit_value(u)
        for d, dip_value in self.dips:
            if np.linalg.norm(u - d) <= DIRECTION_MATCH_TOL:
                val = min(val, dip_value)
        return val

    def values_on(self, dirs) -> np.ndarray:
        dirs = np.asarray(dirs, dtype=float)
        vals = self.base.values_on(dirs)
        for d, dip_value in self.dips:
            hit = np.linalg.norm(dirs - d, axis=1) <= DIRECTION_MATCH_TOL
            vals[hit] = np.minimum(vals[hit], dip_value)
        return vals

    @property
    def special_directions(self) -> np.ndarray:
        own = np.array([d for d, _ in self.dips])
        base = self.base.special_directions
        return np.vstack([base, own]) if base.size else own

    def to_spec(self) -> dict:
        return {
            "kind": "dip",
            "dimension": self.dim,
            "base": self.base.to_spec(),
            "dips": [{"direction": list(d), "value": v} for d, v in self.dips],
        }


class Reciprocal(Integrand):
    """Pointwise reciprocal 1/F, extended 1-homogeneously."""

    kind = "reciprocal"

    def __init__(self, base: Integrand) -> None:
        super().__init__(base.dim)
        self.base = base

    def unit_value(self, u) -> float:
        return 1.0 / self.base.unit_value(u)

    def values_on(self, dirs) -> np.ndarray:
        return 1.0 / self.base.values_on(dirs)

    @property
    def special_directions(self) -> np.ndarray:
        return self.base.special_directions


def inversion_transform(F: Integrand) -> Integrand:
    """The reciprocal cost I(F) = 1/F; an exact involution."""
    if isinstance(F, Reciprocal):
        return F.base
    return Reciprocal(F)


def scan_directions(F: Integrand, grid: SphereGrid) -> np.ndarray:
    """Grid directions plus the cost's special directions (normalized)."""
    sp = np.asarray(F.special_directions, dtype=float)
    if sp.size == 0:
        return grid.directions
    sp = sp / np.linalg.norm(sp, axis=1)[:, None]
    return np.vstack([grid.directions, sp])


def wulff_transform(F: Integrand, grid: SphereGrid) -> GridFunction:
    """W(F)(v) = min over directions w with <v, w> > 0 of F(w) / <v, w>.

    The scan covers the grid plus F's special directions, so flat facets
    and dips are seen exactly. W(F) <= F holds at every grid direction
    because w = v is always a candidate.
    """
    dirs = scan_directions(F, grid)
    vals = F.values_on(dirs)
    if np.any(vals <= 0.0):
        raise ValueError("cost is not positive on the scan directions")
    dots = grid.directions @ dirs.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(dots > 1e-12, vals[None, :] / dots, np.inf)
    return GridFunction(grid, ratios.min(axis=1))


def support_transform(G: GridFunction, grid: SphereGrid | None = None) -> GridFunction:
    """A(G)(v) = max over grid directions w of G(w) * <v, w>.

    This is the support function of the hypograph of G sampled on the
    grid; A(G) >= G holds at every shared direction (w = v is a candidate).
    """
    if np.any(G.values <= 0.0):
        raise ValueError("support transform requires positive samples")
    grid = grid or G.grid
    dots = grid.directions @ G.grid.directions.T
    return GridFunction(grid, (dots * G.values[None, :]).max(axis=1))


def convex_envelope(F: Integrand, grid: SphereGrid) -> GridFunction:
    """D(F) = A(W(F)): the (grid-sampled) largest convex minorant of F."""
    return support_transform(wulff_transform(F, grid))


def contact_contains(F: Integrand, envelope: GridFunction, x, tol: float = 1e-6) -> bool:
    """Whether F touches its convex envelope at x (relative tolerance).

    The zero vector is always in contact. The envelope is grid-sampled, so
    tol should not be pushed below the grid's resolution error.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    x = np.asarray(x, dtype=float)
    if np.linalg.norm(x) == 0.0:
        return True
    fx = F(x)
    return fx - envelope(x) <= tol * max(1.0, fx)


def hypograph_contains(G: GridFunction, x) -> bool:
    """Whether x lies in {y : |y| <= G(y/|y|)}; the origin always does."""
    x = np.asarray(x, dtype=float)
    n = float(np.linalg.norm(x))
    if n == 0.0:
        return True
    return n <= G.unit_value(x / n)
