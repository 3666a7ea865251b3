"""Analytic self-maps of the disk as closed symbolic expression trees.

Every node evaluates on NumPy arrays (and on mpmath numbers, which the
high-precision harness relies on), differentiates exactly by the chain rule,
and reports its 2x2 coefficient matrix when it is linear fractional.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, InconclusiveClassification, InvalidMapError, PreconditionError
from .grid import GridSpec, GridSup, grid_max, polar_points

VALIDITY_TOL = 1e-12
FIXED_POINT_TOL = 1e-9


def _ipow(z, k: int):
    # repeated squaring keeps |z|**k accurate near the circle
    result = None
    base = z
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _cjson(z) -> list[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _clean(z) -> complex:
    z = complex(z)
    return complex(z.real + 0.0, z.imag + 0.0)


class SelfMap:
    """Base class; subclasses are immutable dataclasses."""

    def __call__(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError

    def as_lfm(self) -> np.ndarray | None:
        """Coefficients ``[[a, b], [c, d]]`` of ``(az + b)/(cz + d)``, or None."""
        return None

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Monomial(SelfMap):
    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise InvalidMapError(f"monomial degree must be a positive integer, got {self.k}")

    def __call__(self, z):
        return _ipow(z, self.k)

    def deriv(self, z):
        if self.k == 1:
            return z * 0 + 1
        return self.k * _ipow(z, self.k - 1)

    def as_lfm(self):
        if self.k == 1:
            return np.eye(2, dtype=complex)
        return None

    def to_spec(self):
        return {"type": "identity"} if self.k == 1 else {"type": "monomial", "k": self.k}


def identity() -> Monomial:
    return Monomial(1)


def _turns_to_unit(turns) -> complex:
    if isinstance(turns, Fraction) and (4 % turns.denominator == 0):
        return (1, 1j, -1, -1j)[int(turns * 4) % 4]
    return cmath.exp(2j * math.pi * float(turns))


@dataclass(frozen=True)
class Rotation(SelfMap):
    """``z -> multiplier * z``.  ``turns`` keeps an exact angle when one is known."""

    multiplier: complex
    turns: Fraction | float | None = None

    def __post_init__(self):
        object.__setattr__(self, "multiplier", complex(self.multiplier))
        if abs(abs(self.multiplier) - 1.0) > VALIDITY_TOL:
            raise InvalidMapError("rotation multiplier must be unimodular")

    @classmethod
    def from_turns(cls, turns) -> "Rotation":
        if isinstance(turns, str):
            turns = Fraction(turns)
        elif isinstance(turns, int):
            turns = Fraction(turns)
        if isinstance(turns, Fraction):
            turns = turns - math.floor(turns)
        return cls(_turns_to_unit(turns), turns)

    def __call__(self, z):
        return self.multiplier * z

    def deriv(self, z):
        return z * 0 + self.multiplier

    def as_lfm(self):
        return np.array([[self.multiplier, 0], [0, 1]], dtype=complex)

    def to_spec(self):
        if isinstance(self.turns, Fraction):
            return {"type": "rotation", "angle_turns": str(self.turns)}
        if self.turns is not None:
            return {"type": "rotation", "angle_turns": float(self.turns)}
        return {"type": "rotation", "multiplier": _cjson(self.multiplier)}


@dataclass(frozen=True)
class Automorphism(SelfMap):
    """``z -> phase * (p - z) / (1 - conj(p) z)``."""

    p: complex
    phase: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "phase", complex(self.phase))
        if abs(self.p) >= 1.0:
            raise InvalidMapError("automorphism centre must lie inside the disk")
        if abs(abs(self.phase) - 1.0) > VALIDITY_TOL:
            raise InvalidMapError("automorphism phase must be unimodular")

    def __call__(self, z):
        return self.phase * (self.p - z) / (1 - self.p.conjugate() * z)

    def deriv(self, z):
        return self.phase * (abs(self.p) ** 2 - 1) / (1 - self.p.conjugate() * z) ** 2

    def as_lfm(self):
        return np.array([[-self.phase, self.phase * self.p], [-self.p.conjugate(), 1]], dtype=complex)

    def to_spec(self):
        return {"type": "automorphism", "p": _cjson(self.p), "phase": _cjson(self.phase)}


def lfm_certificate(a, b, c, d) -> tuple[float, float]:
    """Both sides of the self-map inequality for ``(az + b)/(cz + d)``."""
    lhs = abs(b * d.conjugate() - a * c.conjugate()) + abs(a * d - b * c)
    rhs = abs(d) ** 2 - abs(c) ** 2
    return lhs, rhs


@dataclass(frozen=True)
class LinearFractional(SelfMap):
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        lhs, rhs = lfm_certificate(self.a, self.b, self.c, self.d)
        scale = max(1.0, abs(self.d) ** 2)
        if rhs <= 0 or lhs > rhs + VALIDITY_TOL * scale:
            raise InvalidMapError(
                f"linear-fractional map fails the self-map certificate ({lhs!r} > {rhs!r})"
            )

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def deriv(self, z):
        return (self.a * self.d - self.b * self.c) / (self.c * z + self.d) ** 2

    def as_lfm(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def to_spec(self):
        return {"type": "lfm", **{k: _cjson(getattr(self, k)) for k in "abcd"}}


@dataclass(frozen=True)
class ConvexCombination(SelfMap):
    maps: tuple[SelfMap, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.maps or len(self.maps) != len(self.weights):
            raise InvalidMapError("convex combination needs one weight per map")
        if min(self.weights) < 0 or abs(sum(self.weights) - 1.0) > VALIDITY_TOL:
            raise InvalidMapError("convex weights must be non-negative and sum to 1")

    def __call__(self, z):
        return sum(w * f(z) for w, f in zip(self.weights, self.maps))

    def deriv(self, z):
        return sum(w * f.deriv(z) for w, f in zip(self.weights, self.maps))

    def as_lfm(self):
        mats = [f.as_lfm() for f, w in zip(self.maps, self.weights) if w > 0]
        if any(m is None for m in mats):
            return None
        first = mats[0] / mats[0][1, 1] if mats[0][1, 1] != 0 else mats[0]
        for m in mats[1:]:
            m = m / m[1, 1] if m[1, 1] != 0 else m
            if not np.allclose(m, first, rtol=0, atol=1e-15):
                return None
        return first

    def to_spec(self):
        return {
            "type": "convex",
            "maps": [f.to_spec() for f in self.maps],
            "weights": list(self.weights),
        }


@dataclass(frozen=True)
class Scale(SelfMap):
    """Post-multiplication ``z -> c * inner(z)`` with ``|c| <= 1``."""

    c: complex
    inner: SelfMap = field(default_factory=identity)

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if abs(self.c) > 1.0 + VALIDITY_TOL:
            raise InvalidMapError("scale factor must satisfy |c| <= 1")

    def __call__(self, z):
        return self.c * self.inner(z)

    def deriv(self, z):
        return self.c * self.inner.deriv(z)

    def as_lfm(self):
        m = self.inner.as_lfm()
        if m is None:
            return None
        return np.array([[self.c * m[0, 0], self.c * m[0, 1]], [m[1, 0], m[1, 1]]])

    def to_spec(self):
        return {"type": "scale", "c": _cjson(self.c), "map": self.inner.to_spec()}


@dataclass(frozen=True)
class Compose(SelfMap):
    """``outer(inner(z))``."""

    outer: SelfMap
    inner: SelfMap

    def __call__(self, z):
        return self.outer(self.inner(z))

    def deriv(self, z):
        return self.outer.deriv(self.inner(z)) * self.inner.deriv(z)

    def as_lfm(self):
        mo, mi = self.outer.as_lfm(), self.inner.as_lfm()
        if mo is None or mi is None:
            return None
        return mo @ mi

    def to_spec(self):
        return {"type": "compose", "outer": self.outer.to_spec(), "inner": self.inner.to_spec()}


# ---------------------------------------------------------------------------
# evaluation


def validate(phi: SelfMap, grid: GridSpec = GridSpec(levels=12, angles=256)) -> None:
    """Reject ``phi`` if it leaves the closed disk anywhere on a dense grid."""
    z = polar_points(grid.dyadic_radii(), grid.thetas())
    w = np.abs(phi(z))
    if not np.all(np.isfinite(w)) or w.max() > 1.0 + VALIDITY_TOL:
        raise InvalidMapError(f"map leaves the disk: max |phi| = {w.max()!r}")


def eval_map(phi: SelfMap, z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("evaluation point must lie in the open disk")
    w = phi(z)
    if np.any(~np.isfinite(w)) or np.any(np.abs(w) > 1.0 + VALIDITY_TOL):
        raise InvalidMapError("map value left the closed disk")
    return w if np.ndim(w) else complex(w)


def derivative(phi: SelfMap, z):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("derivative point must lie in the open disk")
    d = phi.deriv(z)
    return d if np.ndim(d) else complex(d)


@dataclass
class Orbit:
    """Forward orbit ``phi_1(z), ..., phi_n(z)`` of a base point."""

    phi: SelfMap
    base: complex
    values: list[complex]

    def extend(self, k: int) -> "Orbit":
        z = self.values[-1] if self.values else self.base
        for _ in range(k):
            z = eval_map(self.phi, z)
            self.values.append(z)
        return self

    def __len__(self):
        return len(self.values)


def iterate(phi: SelfMap, z, n: int) -> Orbit:
    if n < 1:
        raise ValueError("orbit length must be at least 1")
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("orbit base must lie in the open disk")
    return Orbit(phi, z, []).extend(n)


def iterates(phi: SelfMap, z, n: int):
    """Yield ``phi_1(z), ..., phi_n(z)`` for an array ``z`` without checks."""
    w = z
    for _ in range(n):
        w = phi(w)
        yield w


def fixes_origin(phi: SelfMap, tol: float = FIXED_POINT_TOL) -> bool:
    return abs(complex(phi(0j))) <= tol


def conjugate_to_origin(phi: SelfMap, p, tol: float = FIXED_POINT_TOL) -> SelfMap:
    """``sigma_p o phi o sigma_p`` for an interior fixed point p of phi."""
    p = complex(p)
    if abs(p) >= 1.0:
        raise PreconditionError("conjugation point must lie inside the disk")
    if abs(complex(phi(p)) - p) > tol:
        raise PreconditionError(f"{p} is not a fixed point of the map")
    if p == 0:
        return phi
    s = Automorphism(p)
    return Compose(s, Compose(phi, s))


def sup_modulus(phi: SelfMap, n: int, grid: GridSpec = GridSpec()) -> GridSup:
    """Grid estimate of ``sup |phi_n|`` over the disk."""
    z = polar_points(grid.dyadic_radii(), grid.thetas())
    w = z
    for w in iterates(phi, z, n):
        pass
    return grid_max(np.abs(w), z, slice(0, grid.levels), grid.coarse_angle_slice())


# ---------------------------------------------------------------------------
# Denjoy-Wolff classification


@dataclass(frozen=True)
class Identity:
    kind = "identity"

    def to_dict(self):
        return {"type": "identity"}


@dataclass(frozen=True)
class EllipticAutomorphism:
    fixed_point: complex
    multiplier: complex
    root_of_unity_order: int | None
    order_source: str  # "exact" (rational angle given) or "numeric"
    denominator_cap: int

    kind = "elliptic"

    def to_dict(self):
        return {
            "type": "elliptic",
            "point": _cjson(self.fixed_point),
            "multiplier": _cjson(self.multiplier),
            "order": self.root_of_unity_order,
            "order_source": self.order_source,
            "denominator_cap": self.denominator_cap,
        }


@dataclass(frozen=True)
class InteriorDW:
    point: complex
    multiplier: complex

    kind = "interior_dw"

    def to_dict(self):
        return {"type": "interior_dw", "point": _cjson(self.point), "multiplier": _cjson(self.multiplier)}


@dataclass(frozen=True)
class BoundaryDW:
    point: complex
    angular_derivative_estimate: float

    kind = "boundary_dw"

    def to_dict(self):
        return {
            "type": "boundary_dw",
            "point": _cjson(self.point),
            "angular_derivative": self.angular_derivative_estimate,
        }


DWClassification = Identity | EllipticAutomorphism | InteriorDW | BoundaryDW


def root_of_unity_order(multiplier, cap: int = 64, tol: float = 1e-12) -> int | None:
    """Smallest q <= cap with multiplier**q == 1, matched on the angle in turns."""
    theta = (cmath.phase(complex(multiplier)) / (2 * math.pi)) % 1.0
    frac = Fraction(theta).limit_denominator(cap)
    if abs(theta - float(frac)) <= tol:
        return frac.denominator
    return None


def angular_derivative_estimate(phi: SelfMap, xi: complex, levels: int = 30) -> float:
    r = 1.0 - 2.0 ** -np.arange(1, levels + 1)
    w = np.abs(phi(r * xi))
    return float(((1.0 - w) / (1.0 - r))[-1])


def _exact_order(phi: SelfMap) -> int | None:
    if isinstance(phi, Rotation) and isinstance(phi.turns, Fraction):
        return phi.turns.denominator
    return None


def _elliptic(phi, p, lam, cap):
    lam = lam / abs(lam)
    exact = _exact_order(phi)
    if exact is not None:
        return EllipticAutomorphism(p, lam, exact, "exact", cap)
    return EllipticAutomorphism(p, lam, root_of_unity_order(lam, cap), "numeric", cap)


def _lfm_fixed_points(m: np.ndarray) -> list[complex]:
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if abs(c) <= 1e-14:
        if abs(d - a) <= 1e-14:
            return []
        return [_clean(b / (d - a))]
    disc = cmath.sqrt((d - a) ** 2 + 4 * b * c)
    return [_clean((a - d + disc) / (2 * c)), _clean((a - d - disc) / (2 * c))]


def _classify_lfm(phi: SelfMap, m: np.ndarray, cap: int) -> DWClassification:
    m = m / np.max(np.abs(m))
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if abs(b) <= 1e-14 and abs(c) <= 1e-14 and abs(a - d) <= 1e-14:
        return Identity()
    det = a * d - b * c
    lhs = abs(b * np.conj(d) - a * np.conj(c))
    is_auto = lhs <= 1e-12 and abs(abs(det) - (abs(d) ** 2 - abs(c) ** 2)) <= 1e-12
    fixed = _lfm_fixed_points(m)
    interior = [p for p in fixed if abs(p) < 1.0 - 1e-12]
    if interior:
        p = interior[0]
        lam = complex(det / (c * p + d) ** 2)
        if is_auto:
            return _elliptic(phi, p, lam, cap)
        return InteriorDW(p, lam)
    boundary = [p / abs(p) for p in fixed if abs(abs(p) - 1.0) <= 1e-6]
    if not boundary:
        raise InconclusiveClassification("linear-fractional map without a fixed point in the closed disk")
    xi = min(boundary, key=lambda p: abs(det / (c * p + d) ** 2))
    return BoundaryDW(xi, angular_derivative_estimate(phi, xi))


def _newton_fixed_point(phi: SelfMap, seed: complex, tol=1e-12, max_steps=200) -> complex | None:
    z = seed
    g = phi(z) - z
    for _ in range(max_steps):
        if abs(g) < tol:
            return z
        dg = phi.deriv(z) - 1.0
        if dg == 0:
            return None
        step = g / dg
        t = 1.0
        while True:
            cand = z - t * step
            if abs(cand) < 1.0:
                gc = phi(cand) - cand
                if abs(gc) < abs(g) or t < 1e-10:
                    break
            t *= 0.5
            if t < 1e-10:
                return None
        z, g = cand, gc
    return z if abs(g) < tol else None


def _seeds() -> list[complex]:
    inner = [0.3 * cmath.exp(2j * math.pi * k / 8) for k in range(8)]
    outer = [0.7 * cmath.exp(2j * math.pi * (k + 0.5) / 8) for k in range(8)]
    return inner + outer


def classify(phi: SelfMap, root_cap: int = 64, max_iter: int = 100_000) -> DWClassification:
    """Denjoy-Wolff classification of a self-map."""
    m = phi.as_lfm()
    if m is not None:
        return _classify_lfm(phi, m, root_cap)

    candidates = []
    if abs(complex(phi(0j))) < 1e-14:
        candidates.append(0j)
    for s in _seeds():
        p = _newton_fixed_point(phi, s)
        if p is not None and abs(p) < 1.0 - FIXED_POINT_TOL:
            candidates.append(complex(p))
    if candidates:
        p = candidates[0]
        lam = complex(phi.deriv(p))
        if abs(lam - 1.0) < FIXED_POINT_TOL:
            return Identity()
        if abs(lam) < 1.0 - FIXED_POINT_TOL:
            return InteriorDW(p, lam)
        return _elliptic(phi, p, lam, root_cap)

    z = np.array([0, 0.5, -0.5, 0.5j, -0.5j], dtype=complex)
    for it in range(1, max_iter + 1):
        prev = z
        z = phi(z)
        if it % 50:
            continue
        centre = z.mean()
        if abs(centre) > 0:
            xi = centre / abs(centre)
            if np.max(np.abs(z - xi)) < 1e-9:
                return BoundaryDW(complex(xi), angular_derivative_estimate(phi, xi))
        if np.max(np.abs(z - prev)) < 1e-15 and np.ptp(np.abs(z - centre)) < 1e-12 and abs(centre) < 1 - 1e-9:
            lam = complex(phi.deriv(centre))
            if abs(lam) < 1.0:
                return InteriorDW(complex(centre), lam)
    raise InconclusiveClassification(f"orbits did not settle within {max_iter} iterations")
