"""Ray optics of a parabolic cylindrical mirror near its focal line.

The mirror cross-section is the parabola x = (b^2 - y^2)/b, translationally
invariant along the focal line.  An observation point sits at distance ``a``
from the focal line in a direction ``gamma`` from the symmetry axis.  The
central object is the incident-angle map

    f(t, gamma) = sin^2(t) * sin(t - gamma) / (1 - cos(t))
                = (1 + cos(t)) * sin(t - gamma)

relating a reflected-ray angle t to its incident angle theta = (a/b) f(t).
The two forms are algebraically identical for t != 0; the second is the
smooth extension used everywhere here (no cancellation at t -> 0).

Self-consistency checks satisfied by this form (all exercised in the test
suite):

* on-axis reduction: f(t, 0) = sin^3(t)/(1 - cos(t));
* even symmetry at gamma = pi/2, which forces the partner relation
  beta = -alpha there;
* the first-order partner shift at gamma near pi/2 carries the
  (2 cos(alpha) + 1) factor that also appears in the edge-shift formula.

Two reflected rays reach the same point whenever f takes a value twice;
with theta0 < 2*pi/3 there are at most two, paired across an interior
extremum of f (a "critical angle").
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import series

__all__ = [
    "TWO_RAY_LIMIT",
    "MirrorGeometry",
    "FocalPoint",
    "PairFamily",
    "RayPair",
    "DegenerateExtremumError",
    "PartnerMultiplicityError",
    "SingularPartnerDerivativeError",
    "incident_map",
    "incident_map_derivative",
    "path_difference_factor",
    "critical_angles",
    "partner_angle",
    "partner_derivative",
    "ray_pair",
    "pair_domain",
    "partner_series",
    "edge_shift",
]

TWO_RAY_LIMIT = 2.0 * math.pi / 3.0

# defaults; every solver entry point accepts overrides
ANGLE_TOL = 1e-12
RESIDUAL_TOL = 1e-12
EDGE_SINGULAR_TOL = 1e-4
_DEGENERATE_F2_TOL = 1e-9
_BISECT_WIDTH = 1e-3


class DegenerateExtremumError(ValueError):
    """Second derivative of the incident map vanishes at an extremum."""


class PartnerMultiplicityError(RuntimeError):
    """More than one partner angle found (breaks the two-ray regime)."""


class SingularPartnerDerivativeError(ZeroDivisionError):
    """d(beta)/d(alpha) requested at a merging pair (f'(beta) ~ 0)."""


@dataclass(frozen=True)
class MirrorGeometry:
    """Half-angle and scale of the parabolic cylinder.

    ``theta0`` is the mirror half-angle seen from the focus; ``b`` sets the
    focus-to-mirror distance scale.  theta0 must stay below 2*pi/3 so that
    an incident ray never produces more than two reflected rays.
    """

    theta0: float
    b: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.theta0 < TWO_RAY_LIMIT:
            raise ValueError(
                f"theta0 must lie in (0, 2*pi/3), got {self.theta0!r}")
        if not self.b > 0.0:
            raise ValueError(f"mirror scale b must be positive, got {self.b!r}")


@dataclass(frozen=True)
class FocalPoint:
    """Observation point: distance ``a`` from the focal line, direction ``gamma``.

    Results are physically meaningful only for a much smaller than the mirror
    scale b; the field assembly warns at a/b >= 0.1 rather than erroring.
    """

    a: float
    gamma: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"distance a must be positive, got {self.a!r}")
        if not 0.0 <= self.gamma <= math.pi:
            raise ValueError(
                f"gamma must lie in [0, pi], got {self.gamma!r}")


@dataclass(frozen=True)
class PairFamily:
    """One branch-pair structure of the incident-angle map.

    ``alpha_interval`` is the maximal closed interval around the critical
    angle on which a partner exists; outside it the interference integrand
    vanishes.  ``edge_singular`` marks families whose critical angle sits
    within EDGE_SINGULAR_TOL of a mirror edge, where the field integrals
    genuinely diverge and downstream integration refuses.
    """

    critical_angle: float
    alpha_interval: tuple[float, float]
    extremum_kind: str  # "minimum" | "maximum"
    edge_singular: bool = False


@dataclass(frozen=True)
class RayPair:
    """A matched pair of reflection angles with the same incident angle."""

    alpha: float
    beta: float
    h: float
    dbeta_dalpha: float


def incident_map(theta_prime: float, gamma: float) -> float:
    """Incident-angle map f(t, gamma) = (1 + cos t) sin(t - gamma)."""
    return (1.0 + math.cos(theta_prime)) * math.sin(theta_prime - gamma)


def _derivative_any(theta_prime: float, gamma: float, order: int) -> float:
    # f = sin(t-g) + sin(2t-g)/2 - sin(g)/2, so every derivative is two sines
    shift = 0.5 * math.pi * order
    return (math.sin(theta_prime - gamma + shift)
            + 2.0 ** (order - 1) * math.sin(2.0 * theta_prime - gamma + shift))


def incident_map_derivative(theta_prime: float, gamma: float, order: int) -> float:
    """Exact n-th derivative of the incident-angle map, n in 1..7."""
    if not 1 <= order <= 7:
        raise ValueError(f"derivative order must be in 1..7, got {order!r}")
    return _derivative_any(theta_prime, gamma, order)


def _f_taylor(theta_prime: float, gamma: float, n: int) -> list[float]:
    # Taylor coefficients of f about theta_prime, orders 0..n-1
    out = [incident_map(theta_prime, gamma)]
    fact = 1.0
    for k in range(1, n):
        fact *= k
        out.append(_derivative_any(theta_prime, gamma, k) / fact)
    return out


def path_difference_factor(alpha: float, beta: float, gamma: float) -> float:
    """Dimensionless path-difference kernel h; the optical path difference
    of the two reflected rays is a*h."""
    return abs(math.cos(gamma) * (math.cos(alpha) - math.cos(beta))
               + math.sin(gamma) * (math.sin(alpha) - math.sin(beta)))


def _signed_kernel(alpha: float, beta: float, gamma: float) -> float:
    # same expression as path_difference_factor without the absolute value
    return (math.cos(gamma) * (math.cos(alpha) - math.cos(beta))
            + math.sin(gamma) * (math.sin(alpha) - math.sin(beta)))


def _refine_root(func, dfunc, lo: float, hi: float, flo: float, fhi: float,
                 residual_tol: float) -> float:
    """Bracketed bisection to a narrow bracket, then safeguarded Newton.

    ``flo``/``fhi`` are func values at the bracket ends (opposite signs).
    The function is cheap, so robustness beats iteration counts.
    """
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    x = 0.5 * (lo + hi)
    fx = func(x)
    for _ in range(60):
        if abs(fx) <= residual_tol:
            return x
        d = dfunc(x)
        step_ok = False
        if d != 0.0:
            xn = x - fx / d
            if lo < xn < hi:
                step_ok = True
        if not step_ok:
            xn = 0.5 * (lo + hi)
        fn = func(xn)
        if (fn > 0.0) == (flo > 0.0):
            lo, flo = xn, fn
        else:
            hi, fhi = xn, fn
        x, fx = xn, fn
        if hi - lo <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def critical_angles(geom: MirrorGeometry, gamma: float,
                    degenerate_tol: float = _DEGENERATE_F2_TOL) -> list[float]:
    """Interior extrema of the incident-angle map, sorted ascending.

    Candidates come from the closed form (2*gamma + (2m+1)*pi)/3 and are
    polished by a bracketed solve of f' = 0.
    """
    t0 = geom.theta0
    out = []
    for m in (-2, -1, 0):
        cand = (2.0 * gamma + (2 * m + 1) * math.pi) / 3.0
        if not -t0 < cand < t0:
            continue
        fpp = _derivative_any(cand, gamma, 2)
        if abs(fpp) < degenerate_tol:
            raise DegenerateExtremumError(
                f"degenerate extremum near theta'={cand!r} (f'' ~ 0)")
        # polish: bracket f' around the candidate and refine
        w = min(1e-2, 0.5 * (t0 - abs(cand)) if t0 > abs(cand) else 1e-2)
        lo, hi = cand - w, cand + w
        fplo = _derivative_any(lo, gamma, 1)
        fphi = _derivative_any(hi, gamma, 1)
        if (fplo > 0.0) != (fphi > 0.0):
            cand = _refine_root(
                lambda x: _derivative_any(x, gamma, 1),
                lambda x: _derivative_any(x, gamma, 2),
                lo, hi, fplo, fphi, RESIDUAL_TOL)
        out.append(cand)
    return sorted(out)


def pair_domain(geom: MirrorGeometry, gamma: float,
                residual_tol: float = RESIDUAL_TOL) -> list[PairFamily]:
    """All pair families: one per interior extremum of the incident map.

    Each family's interval is bounded where the partner would leave the
    mirror edge (or the neighbouring branch's range runs out).  Families
    are disjoint in the two-ray regime.
    """
    t0 = geom.theta0
    crits = critical_angles(geom, gamma)
    if not crits:
        return []
    brk = [-t0] + crits + [t0]
    fams = []
    for j in range(1, len(brk) - 1):
        tc = brk[j]
        f_left = incident_map(brk[j - 1], gamma)
        f_right = incident_map(brk[j + 1], gamma)
        fc = incident_map(tc, gamma)
        is_max = _derivative_any(tc, gamma, 2) < 0.0
        kind = "maximum" if is_max else "minimum"
        limit = max(f_left, f_right) if is_max else min(f_left, f_right)

        def g(x, _lim=limit):
            return incident_map(x, gamma) - _lim

        def dg(x):
            return _derivative_any(x, gamma, 1)

        end_tol = residual_tol * max(1.0, abs(limit))
        left_limited = (limit == f_left)
        if left_limited:
            a_lo = brk[j - 1]
            glo, ghi = g(tc), g(brk[j + 1])
            if abs(ghi) <= end_tol or (glo > 0.0) == (ghi > 0.0):
                a_hi = brk[j + 1]  # symmetric edge values: family spans to the edge
            else:
                a_hi = _refine_root(g, dg, tc, brk[j + 1], glo, ghi, residual_tol)
        else:
            a_hi = brk[j + 1]
            glo, ghi = g(brk[j - 1]), g(tc)
            if abs(glo) <= end_tol or (glo > 0.0) == (ghi > 0.0):
                a_lo = brk[j - 1]
            else:
                a_lo = _refine_root(g, dg, brk[j - 1], tc, glo, ghi, residual_tol)
        edge = min(abs(tc - t0), abs(tc + t0)) < EDGE_SINGULAR_TOL
        fams.append(PairFamily(critical_angle=tc,
                               alpha_interval=(a_lo, a_hi),
                               extremum_kind=kind,
                               edge_singular=edge))
    # disjointness guard; an overlap would mean three rays at one level
    for f1, f2 in zip(fams, fams[1:]):
        if f1.alpha_interval[1] > f2.alpha_interval[0] + ANGLE_TOL:
            raise PartnerMultiplicityError(
                "pair families overlap; two-ray assumption violated")
    return fams


def partner_angle(alpha: float, geom: MirrorGeometry, gamma: float,
                  residual_tol: float = RESIDUAL_TOL,
                  angle_tol: float = ANGLE_TOL) -> Optional[float]:
    """The second reflection angle beta != alpha with f(beta) = f(alpha).

    Returns None where no partner exists (no interference contribution)
    and at the critical angle itself, where the two roots merge.
    """
    fams = [f for f in pair_domain(geom, gamma)
            if f.alpha_interval[0] - angle_tol <= alpha <= f.alpha_interval[1] + angle_tol]
    if len(fams) > 1:
        raise PartnerMultiplicityError(
            f"alpha={alpha!r} admits partners in {len(fams)} families")
    if not fams:
        return None
    fam = fams[0]
    tc = fam.critical_angle
    if abs(alpha - tc) <= angle_tol:
        return None
    a_lo, a_hi = fam.alpha_interval
    target = incident_map(alpha, gamma)
    tol = residual_tol * max(1.0, abs(target))

    def g(x):
        return incident_map(x, gamma) - target

    def dg(x):
        return _derivative_any(x, gamma, 1)

    lo, hi = (tc, a_hi) if alpha < tc else (a_lo, tc)
    glo, ghi = g(lo), g(hi)
    if abs(glo) <= tol:  # partner at the branch end
        return lo
    if abs(ghi) <= tol:
        return hi
    if (glo > 0.0) == (ghi > 0.0):
        # alpha sits within angle_tol outside the true interval
        return None
    return _refine_root(g, dg, lo, hi, glo, ghi, tol)


def partner_derivative(pair: RayPair, gamma: float,
                       singular_tol: float = 1e-10) -> float:
    """d(beta)/d(alpha) = f'(alpha)/f'(beta) for a matched pair."""
    fpb = _derivative_any(pair.beta, gamma, 1)
    if abs(fpb) < singular_tol:
        raise SingularPartnerDerivativeError(
            f"f'(beta) ~ 0 at beta={pair.beta!r}; pair sits at a critical angle")
    return _derivative_any(pair.alpha, gamma, 1) / fpb


def ray_pair(alpha: float, geom: MirrorGeometry, gamma: float) -> Optional[RayPair]:
    """Construct the full RayPair for alpha, or None if no partner exists."""
    beta = partner_angle(alpha, geom, gamma)
    if beta is None:
        return None
    h = path_difference_factor(alpha, beta, gamma)
    fpb = _derivative_any(beta, gamma, 1)
    fpa = _derivative_any(alpha, gamma, 1)
    if abs(fpb) < 1e-10:
        raise SingularPartnerDerivativeError(
            f"pair at alpha={alpha!r} merges at the critical angle")
    return RayPair(alpha=alpha, beta=beta, h=h, dbeta_dalpha=fpa / fpb)


def _partner_series_coeffs(theta_c: float, gamma: float, order: int,
                           degenerate_tol: float = _DEGENERATE_F2_TOL) -> list[float]:
    """Coefficients a_2..a_order of beta = 2*tc - alpha + sum a_k (alpha-tc)^k.

    Determined order by order from f(beta(alpha)) = f(alpha); no printed
    formula is transcribed.  Internal: ``order`` is unrestricted.
    """
    n = order + 2
    fpp = _derivative_any(theta_c, gamma, 2)
    if abs(fpp) < degenerate_tol:
        raise DegenerateExtremumError(
            f"f'' ~ 0 at theta_c={theta_c!r}; no quadratic extremum")
    f_tay = _f_taylor(theta_c, gamma, n)
    f_tay[0] = 0.0  # constant cancels in f(beta) - f(alpha)
    a = [0.0] * (order + 1)  # a[k] valid for k >= 2
    xi = [0.0] * n
    if n > 1:
        xi[1] = 1.0
    for k in range(2, order + 1):
        eta = [0.0] * n
        eta[1] = -1.0
        for m in range(2, k + 1):
            eta[m] = a[m]
        lhs = series.compose_taylor(f_tay, eta)
        rhs = series.compose_taylor(f_tay, xi)
        resid = lhs[k + 1] - rhs[k + 1]
        # a_k enters the order k+1 coefficient as -f'' * a_k
        a[k] = resid / fpp
    return a[2:order + 1]


def partner_series(theta_c: float, gamma: float, order: int) -> list[float]:
    """Local expansion coefficients a_2..a_order of the partner map,
    about a critical angle; order capped at 6."""
    if not 2 <= order <= 6:
        raise ValueError(f"series order must be in 2..6, got {order!r}")
    return _partner_series_coeffs(theta_c, gamma, order)


def edge_shift(geom: MirrorGeometry, gamma: float) -> float:
    """First-order shift of the integration edge as gamma leaves pi/2
    (signed; zero at gamma = pi/2)."""
    t0 = geom.theta0
    return (2.0 * math.sin(t0) ** 2 * (0.5 * math.pi - gamma)
            / ((1.0 - math.cos(t0)) * (2.0 * math.cos(t0) + 1.0)))
