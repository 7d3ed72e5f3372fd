"""
Angle maps on the closed upper half-plane.

Values are circle coordinates in turns, in ``[0, 1)``. Points are complex
numbers and every function broadcasts over numpy arrays.
"""
from enum import Enum

import numpy as np

TAU = 2 * np.pi


class CoincidentPointsError(ValueError):
    pass


class AngleMapKind(str, Enum):
    HYPERBOLIC = "hyperbolic"
    EUCLIDEAN = "euclidean_reflection"

    def __str__(self):
        return self.value


def _to_turns(radians):
    value = np.mod(radians / TAU, 1.0)
    return np.where(value >= 1.0, 0.0, value)


def angles(p, q, kind=AngleMapKind.HYPERBOLIC, strict: bool = True):
    """
    Angle of the edge ``p -> q``.

    The hyperbolic kind measures, at ``p``, the turn from the geodesic towards
    infinity to the geodesic towards ``q``. The Euclidean kind measures, at
    ``q``, the turn from the direction of the mirror point ``conj(p)`` to the
    direction of ``p``. Coincident endpoints raise, or give NaN when
    ``strict`` is false.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    coincident = p == q
    if np.any(coincident):
        if strict:
            raise CoincidentPointsError("angle of an edge between coincident points")
        q = np.where(coincident, q + 1j, q)
    if AngleMapKind(kind) is AngleMapKind.HYPERBOLIC:
        value = _to_turns(np.angle((q - p) / (q - np.conj(p))))
    else:
        towards_p = p - q
        towards_mirror = np.conj(p) - q
        value = _to_turns(
            np.arctan2(towards_p.imag, towards_p.real)
            - np.arctan2(towards_mirror.imag, towards_mirror.real)
        )
    return np.where(coincident, np.nan, value)


def angle(p: complex, q: complex, kind=AngleMapKind.HYPERBOLIC) -> float:
    return float(angles(p, q, kind))


def _arg_gradient(z):
    size = np.abs(z) ** 2
    return np.stack([-z.imag / size, z.real / size], axis=-1)


def angle_gradients(p, q):
    """
    Derivatives of the angle in turns with respect to ``(Re p, Im p)`` and
    ``(Re q, Im q)``. Both kinds are the same function and share them.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    g1 = _arg_gradient(q - p)
    g2 = _arg_gradient(q - np.conj(p))
    source = np.stack([-g1[..., 0] + g2[..., 0], -g1[..., 1] - g2[..., 1]], axis=-1)
    target = g1 - g2
    return source / TAU, target / TAU


def wrap(x):
    """Representative of a circle difference in ``[-1/2, 1/2)``."""
    return np.mod(np.asarray(x) + 0.5, 1.0) - 0.5
