"""Real roots of the per-node quadratics and cubics, and convex-root selection.

The nodal update polynomials are solved in closed form: the stable quadratic
formula in 2D, and Cardano's formula (one real root) or the trigonometric
form (three real roots) in 3D, each followed by one guarded Newton step on
the supplied coefficients.  The kernels are ``@njit`` scalar functions so the
smoother can call them inside compiled sweeps; thin wrappers expose a
friendly tuple-of-roots API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb

from .errors import DegenerateNodeError

_NB = {"nogil": True, "cache": True}

# Near-zero discriminants are classified as the three-real-root branch so a
# clustered root pair is returned instead of a spurious complex pair.
_DISC_TOL = 1e-13

_NAN = float("nan")


@nb.njit(**_NB)
def _cbrt(x):
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


@nb.njit(**_NB)
def _newton_polish(c3, c2, c1, c0, v):
    """One Newton step on c3*v^3+c2*v^2+c1*v+c0; kept only if it helps."""
    pv = ((c3 * v + c2) * v + c1) * v + c0
    dv = (3.0 * c3 * v + 2.0 * c2) * v + c1
    if dv != 0.0:
        w = v - pv / dv
        if math.isfinite(w):
            pw = ((c3 * w + c2) * w + c1) * w + c0
            if abs(pw) <= abs(pv):
                return w
    return v


@nb.njit(**_NB)
def quadratic_roots(q2, q1, q0):
    """Real roots of q2*v^2 + q1*v + q0, ascending.

    Returns ``(count, r0, r1)`` with NaN past ``count``; a negative
    discriminant yields ``count = 0``.  Uses the cancellation-free variant of
    the quadratic formula and one Newton polish per root.
    """
    disc = q1 * q1 - 4.0 * q2 * q0
    if disc < 0.0:
        return 0, _NAN, _NAN
    sq = math.sqrt(disc)
    if q1 >= 0.0:
        qq = -0.5 * (q1 + sq)
    else:
        qq = -0.5 * (q1 - sq)
    ra = qq / q2
    rb = q0 / qq if qq != 0.0 else 0.0
    ra = _newton_polish(0.0, q2, q1, q0, ra)
    rb = _newton_polish(0.0, q2, q1, q0, rb)
    if ra > rb:
        ra, rb = rb, ra
    return 2, ra, rb


@nb.njit(**_NB)
def cubic_roots(c3, c2, c1, c0):
    """All real roots of c3*v^3 + c2*v^2 + c1*v + c0, ascending.

    Returns ``(count, r0, r1, r2)`` with NaN past ``count``; ``count`` is 1
    or 3.  Closed form on the depressed cubic: Cardano when the discriminant
    is positive, the trigonometric triple-angle form otherwise, with near-zero
    discriminants folded into the three-root branch (clustered roots).  Each
    root gets one guarded Newton polish on the original coefficients.
    """
    p = c2 / c3
    q = c1 / c3
    w = c0 / c3
    shift = -p / 3.0
    # depressed cubic y^3 + P*y + Q with v = y + shift
    big_p = q - p * p / 3.0
    big_q = (2.0 * p * p / 27.0 - q / 3.0) * p + w
    half_q = 0.5 * big_q
    third_p = big_p / 3.0
    cube_term = third_p * third_p * third_p
    disc = half_q * half_q + cube_term
    scale = half_q * half_q + abs(cube_term)
    if disc > _DISC_TOL * scale:
        # one real root
        sq = math.sqrt(disc)
        y = _cbrt(-half_q + sq) + _cbrt(-half_q - sq)
        r0 = _newton_polish(c3, c2, c1, c0, y + shift)
        return 1, r0, _NAN, _NAN
    # three real roots (possibly clustered)
    amp = 2.0 * math.sqrt(max(-third_p, 0.0))
    if amp == 0.0:
        r = _newton_polish(c3, c2, c1, c0, shift)
        return 3, r, r, r
    cos3 = 3.0 * big_q / (big_p * amp)
    if cos3 > 1.0:
        cos3 = 1.0
    elif cos3 < -1.0:
        cos3 = -1.0
    phi = math.acos(cos3) / 3.0
    two_thirds_pi = 2.0943951023931953
    ra = amp * math.cos(phi - 2.0 * two_thirds_pi) + shift
    rb = amp * math.cos(phi - two_thirds_pi) + shift
    rc = amp * math.cos(phi) + shift
    ra = _newton_polish(c3, c2, c1, c0, ra)
    rb = _newton_polish(c3, c2, c1, c0, rb)
    rc = _newton_polish(c3, c2, c1, c0, rc)
    # polishing can nudge ordering; restore ascending
    if ra > rb:
        ra, rb = rb, ra
    if rb > rc:
        rb, rc = rc, rb
    if ra > rb:
        ra, rb = rb, ra
    return 3, ra, rb, rc


@dataclass(frozen=True)
class RealRoots:
    """Ascending real roots of a nodal update polynomial."""

    roots: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.roots)


def quadratic_real_roots(q2: float, q1: float, q0: float) -> RealRoots:
    """Real roots of a true quadratic; ``q2 == 0`` is a usage error."""
    if q2 == 0.0:
        raise ValueError("leading coefficient q2 must be nonzero")
    count, r0, r1 = quadratic_roots(q2, q1, q0)
    return RealRoots((r0, r1)[:count])


def cubic_real_roots(c3: float, c2: float, c1: float, c0: float) -> RealRoots:
    """Real roots of a true cubic; ``c3 == 0`` is a usage error."""
    if c3 == 0.0:
        raise ValueError("leading coefficient c3 must be nonzero")
    count, r0, r1, r2 = cubic_roots(c3, c2, c1, c0)
    return RealRoots((r0, r1, r2)[:count])


def select_convex_root(roots: RealRoots) -> float:
    """Smallest real root: the unique convexity-preserving nodal update.

    An empty root set means the node lost ellipticity and raises
    ``DegenerateNodeError``.
    """
    if not roots.roots:
        raise DegenerateNodeError("nodal polynomial has no real roots")
    return roots.roots[0]
