"""Geometry of the open unit disk.

Points are plain Python/NumPy complex numbers; every function here accepts
either scalars or arrays and broadcasts.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

#: Distance from the unit circle below which a point counts as a boundary point.
BOUNDARY_TOL = 1e-12


def _check_interior(z, name="z"):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError(f"{name} must lie in the open unit disk, got |{name}| >= 1")


def is_interior(z) -> bool:
    return bool(np.all(np.abs(z) < 1.0))


def is_boundary(z, tol: float = BOUNDARY_TOL) -> bool:
    return bool(np.all(np.abs(np.abs(z) - 1.0) <= tol))


def pseudo_dist(z, w):
    """Pseudohyperbolic distance ``|z - w| / |1 - conj(w) z|``."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_interior(z, "z")
    _check_interior(w, "w")
    d = np.abs(z - w) / np.abs(1.0 - np.conj(w) * z)
    return d if d.ndim else float(d)


def mobius_swap(p, z):
    """The involutive automorphism ``(p - z) / (1 - conj(p) z)`` exchanging p and 0."""
    p = complex(p)
    _check_interior(p, "p")
    z = np.asarray(z, dtype=complex)
    _check_interior(z, "z")
    out = (p - z) / (1.0 - p.conjugate() * z)
    return out if out.ndim else complex(out)


def blaschke_factor(w, z):
    """Single Blaschke factor with zero at w, ``(w - z) / (1 - conj(w) z)``.

    Unlike :func:`mobius_swap` this may be evaluated on the unit circle, where
    its modulus is one.
    """
    w = complex(w)
    _check_interior(w, "w")
    z = np.asarray(z, dtype=complex)
    out = (w - z) / (1.0 - w.conjugate() * z)
    return out if out.ndim else complex(out)
