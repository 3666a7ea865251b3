"""Finite interpolation on the disk.

Pick-matrix feasibility and minimal-norm bisection, Carleson separation,
Blaschke-Lagrange bases, and the two families of test functions built from
orbit nodes that witness non-ergodicity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonConvergenceError, PreconditionError
from .grid import GridSpec, GridSup, grid_max, polar_points
from .weights import RadialWeight, StandardAlpha, associated_weight_bracket, require_standing

PICK_EIG_FLOOR = -1e-10
MIN_NORM_TOL = 1e-8
ILL_CONDITIONED_DELTA = 1e-6


@dataclass(frozen=True)
class NodeSequence:
    nodes: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.nodes, dtype=complex)).copy()
        a.setflags(write=False)
        object.__setattr__(self, "nodes", a)
        if a.size == 0:
            raise ValueError("need at least one node")
        if np.any(np.abs(a) >= 1.0):
            raise DomainError("interpolation nodes must lie in the open disk")
        if a.size > 1:
            rho = pairwise_rho(a)
            np.fill_diagonal(rho, 1.0)
            if rho.min() <= 0:
                raise ValueError("interpolation nodes must be distinct")

    def __len__(self):
        return self.nodes.size


def as_nodes(nodes) -> NodeSequence:
    return nodes if isinstance(nodes, NodeSequence) else NodeSequence(nodes)


def pairwise_rho(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return np.abs(a[:, None] - a[None, :]) / np.abs(1.0 - np.conj(a)[None, :] * a[:, None])


@dataclass(frozen=True)
class PickProblem:
    nodes: NodeSequence
    targets: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", as_nodes(self.nodes))
        b = np.atleast_1d(np.asarray(self.targets, dtype=complex))
        if b.shape != self.nodes.nodes.shape:
            raise ValueError("one target per node")
        if not np.all(np.isfinite(b)):
            raise ValueError("targets must be finite")
        object.__setattr__(self, "targets", b)

    def scaled(self, c) -> "PickProblem":
        return PickProblem(self.nodes, self.targets * c)


def pick_matrix(p: PickProblem) -> np.ndarray:
    a, b = p.nodes.nodes, p.targets
    return (1.0 - b[:, None] * np.conj(b)[None, :]) / (1.0 - a[:, None] * np.conj(a)[None, :])


def feasible(p: PickProblem, norm_cap: float, floor: float = PICK_EIG_FLOOR) -> bool:
    """Whether some f with sup norm <= norm_cap interpolates the problem."""
    if norm_cap <= 0:
        raise ValueError("norm cap must be positive")
    eig = np.linalg.eigvalsh(pick_matrix(p.scaled(1.0 / norm_cap)))
    return bool(eig.min() >= floor)


def min_norm(p: PickProblem, tol: float = MIN_NORM_TOL) -> float:
    """Smallest sup norm of an interpolant, by bisection on :func:`feasible`."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    lo = float(np.max(np.abs(p.targets)))
    if lo == 0.0:
        return 0.0
    hi = 2.0 * max(1.0, lo)
    while not feasible(p, hi):
        hi *= 2.0
        if hi > 1e12:
            raise NonConvergenceError("no feasible norm below 1e12; the problem is ill-posed")
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if feasible(p, mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def separation_constant(s) -> float:
    """``min_k prod_{j != k} rho(a_j, a_k)``."""
    a = as_nodes(s).nodes
    if a.size == 1:
        return 1.0
    rho = pairwise_rho(a)
    np.fill_diagonal(rho, 1.0)
    return float(np.prod(rho, axis=1).min())


def _excluded_products(factors: np.ndarray) -> np.ndarray:
    """``out[i] = prod_{j != i} factors[j]`` along axis 0, without division."""
    n = factors.shape[0]
    ones = np.ones_like(factors[:1])
    prefix = np.cumprod(np.concatenate([ones, factors[:-1]]), axis=0)
    suffix = np.cumprod(np.concatenate([ones, factors[::-1][:-1]]), axis=0)[::-1]
    return prefix[:n] * suffix[:n]


@dataclass(frozen=True)
class LagrangeBasis:
    """``basis[i](z) = prod_{j != i} B_j(z) / B_j(a_i)`` with Blaschke factors B_j."""

    nodes: NodeSequence
    constants: np.ndarray
    separation: float

    def __call__(self, z) -> np.ndarray:
        """Values of every basis function; shape ``(n,) + shape(z)``."""
        a = self.nodes.nodes
        z = np.asarray(z, dtype=complex)
        if a.size == 1:
            return np.ones((1,) + z.shape, dtype=complex)
        ashape = (-1,) + (1,) * z.ndim
        factors = (a.reshape(ashape) - z[None]) / (1.0 - np.conj(a).reshape(ashape) * z[None])
        return self.constants.reshape(ashape) * _excluded_products(factors)

    def sup_norms(self) -> np.ndarray:
        """Exact sup norms ``prod_{j != i} 1 / rho(a_i, a_j)`` (modulus on the circle)."""
        return np.abs(self.constants)


def lagrange_basis(s) -> LagrangeBasis:
    nodes = as_nodes(s)
    a = nodes.nodes
    if a.size == 1:
        return LagrangeBasis(nodes, np.ones(1, dtype=complex), 1.0)
    factors = (a[None, :] - a[:, None]) / (1.0 - np.conj(a)[None, :] * a[:, None])
    np.fill_diagonal(factors, 1.0)
    denom = np.prod(factors, axis=1)
    delta = float(np.abs(denom).min())
    if delta < ILL_CONDITIONED_DELTA:
        warnings.warn(f"ill-conditioned Lagrange basis: separation {delta:.3g}", RuntimeWarning, stacklevel=2)
    return LagrangeBasis(nodes, 1.0 / denom, delta)


def sum_bound(b: LagrangeBasis, grid: GridSpec = GridSpec()) -> GridSup:
    """Grid estimate of ``sup_z sum_i |basis[i](z)|``."""
    z = polar_points(grid.dyadic_radii(), grid.thetas())
    total = np.abs(b(z)).sum(axis=0)
    return grid_max(total, z, slice(0, grid.levels), grid.coarse_angle_slice())


# ---------------------------------------------------------------------------
# test functions


_ADAPT_RADII = np.array([0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.95])
_ADAPT_ANGLES = 16


def node_adapted_points(nodes: np.ndarray) -> np.ndarray:
    """Images of a fixed polar grid under the automorphisms sending 0 to each node.

    Shape ``(len(nodes), angles * radii)``; these resolve functions that vary
    on the pseudohyperbolic scale around nodes far closer to the circle than
    any dyadic level of a global grid.
    """
    u = polar_points(_ADAPT_RADII, 2 * np.pi * np.arange(_ADAPT_ANGLES) / _ADAPT_ANGLES).ravel()
    w = np.asarray(nodes, dtype=complex)[:, None]
    return (w - u[None, :]) / (1.0 - np.conj(w) * u[None, :])


def weighted_sup(values_fn: Callable, weight_fn: Callable, nodes: np.ndarray, grid: GridSpec) -> GridSup:
    """``sup |f|·weight`` over a global dyadic grid plus node-adapted points."""
    z = polar_points(grid.dyadic_radii(), grid.thetas())
    v = np.abs(values_fn(z)) * weight_fn(np.abs(z))
    coarse_global = float(v[grid.coarse_angle_slice()][:, : grid.levels].max())
    best = grid_max(v, z, slice(0, grid.levels), grid.coarse_angle_slice())
    za = node_adapted_points(nodes)
    za = za[np.abs(za) < 1.0]
    if za.size:
        va = np.abs(values_fn(za)) * weight_fn(np.abs(za))
        i = int(np.argmax(va))
        adapted = float(np.max(va))
        coarse = max(coarse_global, adapted)
        if adapted > best.value:
            return GridSup(adapted, complex(za[i]), coarse)
        return GridSup(best.value, best.point, coarse)
    return best


@dataclass(frozen=True)
class TestFunction:
    """A test function given by an evaluator together with its exact node values.

    ``norm`` is the measured weighted sup norm and ``norm_bound`` a certified
    upper bound for it.
    """

    evaluate: Callable
    nodes: NodeSequence
    node_values: np.ndarray
    norm: GridSup | None
    norm_bound: float
    node_bracket: np.ndarray | None = None
    alpha_norm: GridSup | None = None

    __test__ = False  # not a pytest class

    def __call__(self, z):
        return self.evaluate(z)


def thm3_nodes_values(w: np.ndarray, m: int, alpha: float) -> np.ndarray:
    return np.abs(w) ** (2 * m) / (1.0 - np.abs(w) ** 2) ** alpha


def thm3_test_function(nodes, m: int, alpha: float, grid: GridSpec | None = GridSpec(levels=24, angles=256)) -> TestFunction:
    """``f_m(z) = sum_i z^m conj(w_i)^m basis_i(z) (1 - conj(w_i) z)^-alpha``.

    With ``alpha = 0`` this is the bounded-function family ``z^m g_m(z)``.
    Pass ``grid=None`` to skip the measured norm.
    """
    if m < 1:
        raise ValueError("m must be positive")
    seq = as_nodes(nodes)
    w = seq.nodes
    basis = lagrange_basis(seq)
    coeff = np.conj(w) ** m

    def f(z):
        z = np.asarray(z, dtype=complex)
        ashape = (-1,) + (1,) * z.ndim
        kern = np.exp(-alpha * np.log(1.0 - np.conj(w).reshape(ashape) * z[None]))
        return z**m * np.sum(coeff.reshape(ashape) * basis(z) * kern, axis=0)

    bound = float(np.sum(np.abs(w) ** m * basis.sup_norms()))
    norm = None
    if grid is not None:
        norm = weighted_sup(f, lambda r: (1.0 - r) ** alpha, w, grid)
    return TestFunction(f, seq, thm3_nodes_values(w, m, alpha), norm, bound)


def thm1_test_function(nodes, nu: RadialWeight, grid: GridSpec | None = GridSpec(levels=24, angles=256),
                       alpha: float | None = None) -> TestFunction:
    """``f_n(z) = sum_i z conj(w_i) basis_i(z) g_i(z)`` with unit-ball kernels g_i.

    ``g_i`` is the bracket witness at ``w_i``, so ``f_n(w_i) = |w_i|^2 / upper_i``;
    ``node_bracket`` holds the interval ``|w_i|^2 [1/upper_i, 1/nu(w_i)]`` that
    contains the ideal value ``|w_i|^2 / nu_tilde(w_i)``.
    """
    require_standing(nu)
    seq = as_nodes(nodes)
    w = seq.nodes
    basis = lagrange_basis(seq)
    brackets = [associated_weight_bracket(nu, x, check=False) for x in w]
    kernels = [b.witness for b in brackets]

    def f(z):
        z = np.asarray(z, dtype=complex)
        vals = basis(z)
        out = np.zeros(z.shape, dtype=complex)
        for i, g in enumerate(kernels):
            out = out + np.conj(w[i]) * vals[i] * g(z)
        return z * out

    node_values = np.array([abs(x) ** 2 * complex(g(x)).real for x, g in zip(w, kernels)])
    node_bracket = np.array([[abs(x) ** 2 / b.upper, abs(x) ** 2 / b.lower] for x, b in zip(w, brackets)])
    bound = float(np.sum(np.abs(w) * basis.sup_norms()))
    norm = alpha_norm = None
    if grid is not None:
        norm = weighted_sup(f, nu, w, grid)
        if alpha is not None:
            alpha_norm = weighted_sup(f, lambda r: (1.0 - r) ** alpha, w, grid)
    return TestFunction(f, seq, node_values, norm, bound, node_bracket, alpha_norm)
