"""Radial weights on the disk and brackets for their associated weights.

A weight is radial, non-increasing, vanishes at the circle and satisfies the
Lusky doubling condition.  The associated weight
``nu_tilde(z) = 1 / sup{|f(z)| : ||f||_nu <= 1}`` is never computed exactly;
:func:`associated_weight_bracket` brackets it between ``nu(z)`` and the best
value achieved by a family of normalised reproducing-kernel powers.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError

EDGE_RADIUS = 1.0 - 2.0 ** -30
LUSKY_THRESHOLD = 1e-3
LUSKY_N_CHECK = 20


class RadialWeight:
    """``nu(z) = nu(|z|)``; subclasses implement ``value(r)`` on arrays."""

    kind = "abstract"
    #: known symbolically to tend to 0 at the circle
    vanishes = False

    def value(self, r):
        raise NotImplementedError

    def log_value(self, r):
        return np.log(self.value(r))

    def __call__(self, r):
        return self.value(np.asarray(r, dtype=float))

    def is_decreasing(self) -> bool:
        return True

    def kernel_exponents(self) -> tuple[float, ...]:
        return (0.25, 0.5, 1.0, 2.0, 4.0)

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class StandardAlpha(RadialWeight):
    """``(1 - r) ** alpha``."""

    alpha: float

    kind = "alpha"
    vanishes = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def value(self, r):
        return (1.0 - r) ** self.alpha

    def log_value(self, r):
        return self.alpha * np.log1p(-r)

    def kernel_exponents(self):
        return (float(self.alpha),)

    def to_spec(self):
        return {"type": "alpha", "alpha": self.alpha}


@dataclass(frozen=True)
class LogWeight(RadialWeight):
    """``(1 - r) ** alpha * (1 + log(1 / (1 - r))) ** -beta``."""

    alpha: float = 1.0
    beta: float = 1.0

    kind = "log"
    vanishes = True

    def __post_init__(self):
        if not self.alpha > 0 or self.beta < 0:
            raise ValueError("log weight needs alpha > 0 and beta >= 0")

    def value(self, r):
        return (1.0 - r) ** self.alpha * (1.0 - np.log1p(-r)) ** -self.beta

    def to_spec(self):
        return {"type": "log", "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class ExpWeight(RadialWeight):
    """``exp(-c / (1 - r))``: decreasing and vanishing, but not Lusky."""

    c: float = 1.0

    kind = "exp"
    vanishes = True

    def value(self, r):
        return np.exp(-self.c / (1.0 - r))

    def log_value(self, r):
        return -self.c / (1.0 - r)

    def to_spec(self):
        return {"type": "exp", "c": self.c}


@dataclass(frozen=True)
class Tabulated(RadialWeight):
    """Piecewise-linear weight through ``(radii[i], values[i])``.

    Left of the first radius the first value is held.  Beyond the last radius
    the weight either falls linearly to 0 at ``r = 1`` (``tail="zero"``) or is
    held constant (``tail="constant"``).
    """

    radii: tuple[float, ...]
    values: tuple[float, ...]
    tail: str = "zero"

    kind = "table"

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        r, v = np.array(self.radii), np.array(self.values)
        if len(r) == 0 or len(r) != len(v):
            raise ValueError("table needs matching, non-empty radii and values")
        if np.any(np.diff(r) <= 0) or r[0] < 0 or r[-1] >= 1:
            raise ValueError("table radii must increase strictly inside [0, 1)")
        if np.any(v <= 0):
            raise ValueError("table values must be positive")
        if self.tail not in ("zero", "constant"):
            raise ValueError("tail must be 'zero' or 'constant'")

    @property
    def vanishes(self):
        return self.tail == "zero"

    def value(self, r):
        xs, ys = list(self.radii), list(self.values)
        if self.tail == "zero":
            xs.append(1.0)
            ys.append(0.0)
        return np.interp(r, xs, ys)

    def is_decreasing(self):
        return bool(np.all(np.diff(self.values) <= 0))

    def to_spec(self):
        return {"type": "table", "radii": list(self.radii), "values": list(self.values), "tail": self.tail}


def weight_eval(nu: RadialWeight, z) -> float | np.ndarray:
    """nu at a point (complex) or radius (real) of the open disk."""
    r = np.abs(np.asarray(z))
    if np.any(r >= 1.0):
        raise DomainError("weights are defined on the open disk only")
    out = nu(r)
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# standing properties


@dataclass(frozen=True)
class LuskyCheck:
    floor: float
    passed: bool
    n_check: int


def check_lusky(nu: RadialWeight, n_check: int = LUSKY_N_CHECK, threshold: float = LUSKY_THRESHOLD) -> LuskyCheck:
    if n_check < 4:
        raise ValueError("n_check must be at least 4")
    n = np.arange(1, n_check + 1, dtype=float)
    with np.errstate(divide="ignore"):
        logs = nu.log_value(1.0 - 2.0 ** (-n - 1)) - nu.log_value(1.0 - 2.0 ** -n)
    floor = float(np.exp(np.min(logs)))
    return LuskyCheck(floor, floor >= threshold, n_check)


def check_decreasing(nu: RadialWeight, samples: int = 1000) -> bool:
    r = np.linspace(0.0, EDGE_RADIUS, samples)
    v = nu(r)
    return nu.is_decreasing() and bool(np.all(np.diff(v) <= 1e-15 * np.abs(v[:-1])))


def check_vanishing(nu: RadialWeight, tol: float = 1e-2) -> tuple[float, bool]:
    """Value at ``1 - 2**-30`` and whether nu tends to 0 at the circle."""
    edge = float(nu(EDGE_RADIUS))
    return edge, bool(nu.vanishes or edge <= tol * float(nu(0.0)))


@dataclass(frozen=True)
class WeightProperties:
    decreasing: bool
    vanishing: bool
    edge_value: float
    lusky: LuskyCheck

    @property
    def ok(self) -> bool:
        return self.decreasing and self.vanishing and self.lusky.passed

    def to_dict(self):
        return {
            "radial": True,
            "decreasing": self.decreasing,
            "vanishing": self.vanishing,
            "edge_value": self.edge_value,
            "lusky_floor": self.lusky.floor,
            "lusky_pass": self.lusky.passed,
            "lusky_n_check": self.lusky.n_check,
        }


def check_properties(nu: RadialWeight, n_check: int = LUSKY_N_CHECK) -> WeightProperties:
    edge, vanishing = check_vanishing(nu)
    return WeightProperties(check_decreasing(nu), vanishing, edge, check_lusky(nu, n_check))


def require_standing(nu: RadialWeight) -> None:
    props = check_properties(nu)
    if not props.ok:
        raise PreconditionError(f"weight fails the standing properties: {props.to_dict()}")


# ---------------------------------------------------------------------------
# kernel test functions and the associated-weight bracket


@dataclass(frozen=True)
class KernelFunction:
    """``((1 - |w|^2) / (1 - conj(w) z)^2) ** beta / norm`` (principal branch).

    ``norm`` is the weighted sup norm of the unnormalised kernel, so the
    function lies in the unit ball of the weighted space.  ``beta = 0`` gives
    the constant ``1 / norm``.
    """

    w: complex
    beta: float
    norm: float

    def __call__(self, z):
        if self.beta == 0:
            return np.ones_like(np.asarray(z, dtype=complex)) / self.norm
        w = complex(self.w)
        base = (1.0 - abs(w) ** 2) / (1.0 - w.conjugate() * np.asarray(z, dtype=complex)) ** 2
        return np.exp(self.beta * np.log(base)) / self.norm


def _radial_profile(s: float, beta: float, t) -> np.ndarray:
    return ((1.0 - s * s) / (1.0 - s * t) ** 2) ** beta


def _t_grid(s: float) -> np.ndarray:
    local = 1.0 - (1.0 - s) * 2.0 ** np.linspace(-12, 12, 97)
    dyadic = 1.0 - 2.0 ** -np.arange(0, 52, dtype=float)
    t = np.concatenate([np.linspace(0.0, 1.0, 2001, endpoint=False), local, dyadic])
    return np.unique(t[(t >= 0) & (t < 1)])


def kernel_norm(nu: RadialWeight, s: float, beta: float) -> float:
    """``sup_z nu(z) |k_w(z)|**beta`` for ``|w| = s``; attained on the ray of w."""
    if beta == 0:
        return float(nu(0.0))
    if isinstance(nu, StandardAlpha) and beta == nu.alpha:
        q = 1.0 if s <= 0.5 else 1.0 / (4.0 * s * (1.0 - s))
        return float(((1.0 - s * s) * q) ** beta)
    t = _t_grid(s)
    v = nu(t) * _radial_profile(s, beta, t)
    best = float(v.max())
    # refine around the grid maximum (the radial profile is unimodal)
    for _ in range(3):
        i = int(np.argmax(v))
        lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]
        t = np.linspace(lo, hi, 201)
        v = nu(t) * _radial_profile(s, beta, t)
        best = max(best, float(v.max()))
    return best


_S_GRID = np.unique(np.concatenate([np.linspace(0.0, 0.95, 96), 1.0 - 2.0 ** -np.linspace(4.4, 40, 713)]))


@functools.lru_cache(maxsize=64)
def _kernel_table(nu: RadialWeight, beta: float) -> np.ndarray:
    return np.array([kernel_norm(nu, s, beta) for s in _S_GRID])


@dataclass(frozen=True)
class AssociatedWeightBracket:
    lower: float
    upper: float
    witness: KernelFunction

    @property
    def ratio(self) -> float:
        return self.upper / self.lower


def associated_weight_bracket(nu: RadialWeight, z, check: bool = True) -> AssociatedWeightBracket:
    """Bracket ``nu(z) <= nu_tilde(z) <= upper`` using kernel test functions.

    The witness is the normalised kernel attaining ``upper``; it lies in the
    unit ball and takes the value ``1 / upper`` at z.
    """
    if check:
        require_standing(nu)
    z = complex(z)
    r = abs(z)
    if r >= 1.0:
        raise DomainError("bracket point must lie in the open disk")
    lower = float(nu(r))
    direction = z / r if r > 0 else 1.0
    best = (float(nu(0.0)), KernelFunction(0j, 0.0, float(nu(0.0))))
    for beta in nu.kernel_exponents():
        extra = np.array([r, 2 * r / (1 + r)])
        s_all = np.concatenate([_S_GRID, extra])
        norms = np.concatenate([_kernel_table(nu, beta), [kernel_norm(nu, s, beta) for s in extra]])
        ratios = norms / _radial_profile(s_all, beta, r)
        i = int(np.argmin(ratios))
        if ratios[i] < best[0]:
            best = (float(ratios[i]), KernelFunction(complex(s_all[i] * direction), beta, float(norms[i])))
    if best[0] < lower:
        # rounding put the kernel ratio below nu(z); enlarge the normalisation
        # so the witness stays in the unit ball and attains 1/nu(z)
        g = best[1]
        best = (lower, KernelFunction(g.w, g.beta, g.norm * lower / best[0]))
    return AssociatedWeightBracket(lower, best[0], best[1])


def nu_tilde_slack(nu: RadialWeight, samples: int = 100) -> float:
    """Uniform bound on ``nu_tilde / nu`` used when nu replaces nu_tilde."""
    if isinstance(nu, StandardAlpha):
        return 2.0 ** nu.alpha
    radii = 1.0 - 2.0 ** -np.linspace(0, 20, samples)
    return max(associated_weight_bracket(nu, r, check=False).ratio for r in radii)
