"""Sign-region analysis: where the effective perturbation u stays positive
and decreasing, which is what guarantees monotone convergence.

The slope of u factors through pairs of polynomials in (x^2, a): the pair
(alpha, beta) builds u itself, the pair (alpha_tilde, beta_tilde) builds u',
and each pair satisfies a difference-of-squares identity that cancels the
(x^2-1) pole/zero so signs can be read off polynomial loci.  This module
evaluates all of them (Horner in x^2, exact integer coefficients times powers
of a), traces their zero curves, verifies the a=2 positivity chain, and
computes the critical shape value a_c below which u' turns positive
somewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError

__all__ = [
    "A_C_NOMINAL",
    "X_G1_ROOT",
    "alpha",
    "beta",
    "g1",
    "g2",
    "gamma_poly",
    "alpha_tilde",
    "beta_tilde",
    "gamma_tilde_coeffs",
    "gamma_tilde",
    "poly_A",
    "poly_B",
    "poly_C1",
    "poly_C2",
    "RegionPolyValues",
    "eval_region_polys",
    "eval_u_prime",
    "u_prime_a2",
    "Section3Report",
    "verify_section3_positivity",
    "ACResult",
    "find_a_c",
    "find_a_g",
    "RegionReport",
    "trace_curves",
]

# nominal critical shape value (find_a_c recomputes it with an error bar)
A_C_NOMINAL = 0.664

# positive root of g1: x^2 = (-9 + sqrt(96))/15; above it g1 > 0 and the
# gamma = 0 locus cannot exist
X_G1_ROOT = math.sqrt((-9.0 + math.sqrt(96.0)) / 15.0)


def _horner_x2(x2, coeffs_low_to_high):
    """Polynomial in x^2, Horner form, lowest coefficient first."""
    acc = np.zeros_like(np.asarray(x2, dtype=float))
    for c in reversed(coeffs_low_to_high):
        acc = acc * x2 + c
    return acc


def alpha(a, x):
    """Even part of the u numerator."""
    x2 = np.asarray(x, dtype=float) ** 2
    return _horner_x2(
        x2,
        [8.0 * a * a + 2.0 * a, 8.0 * a * a + 12.0 * a + 7.0, 6.0 * (3.0 * a - 1.0), 15.0],
    )


def beta(a, x):
    """Odd part of the u numerator (carries the sqrt(x^2+a) weight)."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + np.asarray(a, dtype=float)) * x * (3.0 * x * x + 2.0 * a - 1.0)


def g1(x):
    """15 x^4 + 18 x^2 - 1; its sign gates the gamma = 0 locus."""
    x2 = np.asarray(x, dtype=float) ** 2
    return _horner_x2(x2, [-1.0, 18.0, 15.0])


def g2(a, x):
    """Strictly positive remainder of gamma for a > 0."""
    x2 = np.asarray(x, dtype=float) ** 2
    return (
        4.0 * a * a * _horner_x2(x2, [1.0, 90.0, 141.0])
        + 32.0 * a**3 * (9.0 * x2 + 1.0)
        + 64.0 * a**4
    )


def gamma_poly(a, x):
    """gamma = g1 * (15 x^4 + 36 a x^2) + g2; satisfies
    alpha^2 - 64 (x^2+a) beta^2 = (x^2-1)^2 gamma."""
    x2 = np.asarray(x, dtype=float) ** 2
    return g1(x) * (15.0 * x2 * x2 + 36.0 * a * x2) + g2(a, x)


def alpha_tilde(a, x):
    """Even-weight part of the u' numerator; odd in x."""
    x = np.asarray(x, dtype=float)
    return x * _alpha_tilde_reduced(a, x * x)


def _alpha_tilde_reduced(a, x2):
    """alpha_tilde / x as a polynomial in x^2."""
    c0 = -6.0 * a - 48.0 * a**3
    c1 = 14.0 + 18.0 * a - 144.0 * a * a - 16.0 * a**3
    c2 = -42.0 - 162.0 * a - 48.0 * a * a
    c3 = -6.0 - 42.0 * a
    return _horner_x2(x2, [c0, c1, c2, c3, -30.0])


def beta_tilde(a, x):
    """Square-root-weighted part of the u' numerator; even in x."""
    x2 = np.asarray(x, dtype=float) ** 2
    return np.sqrt(np.asarray(a, dtype=float) + 1.0) * _beta_tilde_reduced(a, x2)


def _beta_tilde_reduced(a, x2):
    """beta_tilde / sqrt(a+1) as a polynomial in x^2."""
    return _horner_x2(
        x2,
        [a - 2.0 * a * a, -2.0 - 2.0 * a - 6.0 * a * a, 6.0 - 15.0 * a, -12.0],
    )


def gamma_tilde_coeffs(a) -> np.ndarray:
    """Coefficients of gamma_tilde as a degree-6 polynomial in x^2 (low to
    high); alpha_tilde^2 - 64 (x^2+a) beta_tilde^2 = (x^2-1)^3 gamma_tilde.
    For array a the result has shape (7,) + a.shape."""
    a = np.asarray(a, dtype=float)
    return np.array(
        [
            a**3 * (64.0 - 192.0 * a + 256.0 * a**3),
            a * a * (-228.0 - 1152.0 * a * a + 1536.0 * a**3),
            a * (168.0 + 1068.0 * a - 960.0 * a * a + 3648.0 * a**3),
            60.0 - 504.0 * a + 4500.0 * a * a + 4992.0 * a**3,
            -180.0 + 8568.0 * a + 4644.0 * a * a,
            3060.0 + 2520.0 * a,
            900.0 * np.ones_like(a),
        ]
    )


def gamma_tilde(a, x):
    x2 = np.asarray(x, dtype=float) ** 2
    coeffs = gamma_tilde_coeffs(a)
    acc = np.zeros_like(x2 + coeffs[0])
    for i in range(6, -1, -1):
        acc = acc * x2 + coeffs[i]
    return acc


# ---- a = 2 positivity chain -------------------------------------------------

_C1_COEFFS = [-1152.0, 2880.0, 34008.0, 77952.0, 83706.0, 49880.0, 16740.0, 3000.0, 250.0]
_C2_COEFFS = [1152.0, 4800.0, 8904.0, 9672.0, 6322.0, 2236.0, 322.0]


def poly_A(x):
    """a=2 denominator polynomial 5x^6 + 10x^4 + 21x^2 + 12."""
    x2 = np.asarray(x, dtype=float) ** 2
    return _horner_x2(x2, [12.0, 21.0, 10.0, 5.0])


def poly_B(x):
    """a=2 denominator companion 8 sqrt(3) x (x^2+1) sqrt(x^2+2)."""
    x = np.asarray(x, dtype=float)
    return 8.0 * math.sqrt(3.0) * x * (x * x + 1.0) * np.sqrt(x * x + 2.0)


def poly_C1(x):
    """Odd numerator polynomial of -u' at a=2 (only its x term is negative)."""
    x = np.asarray(x, dtype=float)
    return x * _horner_x2(x * x, _C1_COEFFS)


def poly_C2(x):
    """Even numerator polynomial of -u' at a=2, times 8 sqrt(3); positive."""
    x2 = np.asarray(x, dtype=float) ** 2
    return 8.0 * math.sqrt(3.0) * _horner_x2(x2, _C2_COEFFS)


def u_prime_a2(x):
    """Slope of u at a=2 in its explicit radical form:

        u' = -(3/8) (C1 sqrt(x^2+2) + C2) / (sqrt(x^2+2) [(x^2+2)^2 (A+B)]^2)
    """
    x = np.asarray(x, dtype=float)
    r = np.sqrt(x * x + 2.0)
    denom_core = (x * x + 2.0) ** 2 * (poly_A(x) + poly_B(x))
    return -0.375 * (poly_C1(x) * r + poly_C2(x)) / (r * denom_core**2)


@dataclass(frozen=True)
class RegionPolyValues:
    a: float
    x: float
    alpha: float
    beta: float
    g1: float
    g2: float
    gamma: float
    alpha_tilde: float
    beta_tilde: float
    gamma_tilde: float


def eval_region_polys(a: float, x: float) -> RegionPolyValues:
    """All sign-analysis polynomials at one point."""
    return RegionPolyValues(
        a=a,
        x=x,
        alpha=float(alpha(a, x)),
        beta=float(beta(a, x)),
        g1=float(g1(x)),
        g2=float(g2(a, x)),
        gamma=float(gamma_poly(a, x)),
        alpha_tilde=float(alpha_tilde(a, x)),
        beta_tilde=float(beta_tilde(a, x)),
        gamma_tilde=float(gamma_tilde(a, x)),
    )


def eval_u_prime(a, x):
    """Slope of u for general a, pole-free at x = 1.

    Two algebraically equivalent quotients are available:

        u' = gamma_tilde_minus / (8 (x^2+a)^3 (x^2-1)^3)          (minus form)
        u' = gamma_tilde / (8 (x^2+a)^3 gamma_tilde_plus)         (plus form)

    with gamma_tilde_pm = alpha_tilde +- 8 sqrt(x^2+a) beta_tilde.  The zero
    that cancels the (x^2-1)^3 lives in the minus combination, and
    gamma_tilde_plus(1) = -128 (1+a)^3 never vanishes, so the plus form is
    used wherever alpha_tilde and beta_tilde share a sign (their sum is then
    subtraction-free); elsewhere the minus combination is itself
    subtraction-free and x is provably away from 1.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)
    x2 = x * x
    r = np.sqrt(x2 + a)
    ta = alpha_tilde(a, x)
    tb8 = 8.0 * r * beta_tilde(a, x)
    tg = gamma_tilde(a, x)
    like_signs = (ta <= 0.0) == (tb8 <= 0.0)
    near_one = np.abs(x2 - 1.0) < 1e-3
    use_plus = like_signs | near_one
    out = np.empty_like(x)
    denom8 = 8.0 * (x2 + a) ** 3
    if use_plus.any():
        m = use_plus
        out[m] = tg[m] / (denom8[m] * (ta[m] + tb8[m]))
    if (~use_plus).any():
        m = ~use_plus
        out[m] = (ta[m] - tb8[m]) / (denom8[m] * (x2[m] - 1.0) ** 3)
    return out[0] if scalar else out


# ---- a = 2 positivity verification ------------------------------------------


@dataclass
class Section3Report:
    n_nodes: int
    all_positive: bool
    min_combination: float
    argmin_x: float
    inequality_holds: bool
    min_inequality_margin: float
    failures: list[float] = field(default_factory=list)


def verify_section3_positivity(x_grid: np.ndarray | None = None) -> Section3Report:
    """Check the a=2 positivity chain on a dense grid:  over every node,
    C1 sqrt(x^2+2) + C2 > 0, and the supporting inequality
    8 sqrt(3) (4800 x^2 + 1152) > 1152 x sqrt(x^2+2)."""
    if x_grid is None:
        x_grid = np.linspace(1e-3, 10.0, 10000)
    r = np.sqrt(x_grid**2 + 2.0)
    combo = poly_C1(x_grid) * r + poly_C2(x_grid)
    margin = 8.0 * math.sqrt(3.0) * (4800.0 * x_grid**2 + 1152.0) - 1152.0 * x_grid * r
    imin = int(np.argmin(combo))
    return Section3Report(
        n_nodes=x_grid.size,
        all_positive=bool(np.all(combo > 0.0)),
        min_combination=float(combo[imin]),
        argmin_x=float(x_grid[imin]),
        inequality_holds=bool(np.all(margin > 0.0)),
        min_inequality_margin=float(margin.min()),
        failures=[float(x) for x in x_grid[combo <= 0.0]][:20],
    )


# ---- critical values ---------------------------------------------------------


def _sup_u_prime(a: float, n_scan: int = 4000, x_hi: float = 5.0) -> float:
    x = np.linspace(x_hi / n_scan, x_hi, n_scan)
    v = eval_u_prime(a, x)
    i = int(np.argmax(v))
    lo = x[max(i - 1, 0)]
    hi = x[min(i + 1, n_scan - 1)]
    fine = np.linspace(lo, hi, 2001)
    return max(float(v[i]), float(eval_u_prime(a, fine).max()))


@dataclass(frozen=True)
class ACResult:
    a_c: float
    width: float
    bracket: tuple[float, float]

    def __float__(self):
        return self.a_c


def find_a_c(
    bracket: tuple[float, float] = (0.3, 1.0),
    tol: float = 1e-4,
    n_scan: int = 4000,
    x_hi: float = 5.0,
) -> ACResult:
    """Critical shape value: the infimum of a for which u'(x; a) < 0 at every
    x > 0, located by bisection on the sign of sup_x u' (dense scan plus
    local refinement).  The bisection width is reported, never hidden."""
    lo, hi = bracket
    s_lo = _sup_u_prime(lo, n_scan, x_hi)
    s_hi = _sup_u_prime(hi, n_scan, x_hi)
    if not (s_lo > 0.0 > s_hi):
        raise BracketError(
            f"sup u' does not change sign on [{lo}, {hi}]: {s_lo:.3e}, {s_hi:.3e}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _sup_u_prime(mid, n_scan, x_hi) > 0.0:
            lo = mid
        else:
            hi = mid
    return ACResult(a_c=0.5 * (lo + hi), width=hi - lo, bracket=(lo, hi))


def find_a_g(g: float) -> float:
    """Shape bound equivalent to a positive mixing coefficient:
    a_g = (1 + sqrt(1 + 4 g^2)) / (2 g^2)."""
    if not g > 0.0:
        raise ValueError("g must be > 0")
    return (1.0 + math.sqrt(1.0 + 4.0 * g * g)) / (2.0 * g * g)


# ---- curve tracing ------------------------------------------------------------


def _bisect(fn, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_roots(fn, grid: np.ndarray) -> list[float]:
    """All bisected roots between sign changes of fn sampled on grid."""
    vals = fn(grid)
    roots = []
    sign = np.sign(vals)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in flips:
        roots.append(_bisect(lambda t: float(fn(np.asarray([t]))[0]), float(grid[i]), float(grid[i + 1])))
    for i in np.nonzero(vals == 0.0)[0]:
        roots.append(float(grid[i]))
    return sorted(roots)


def _largest_a_with_root(fn_of_a_grid, a_hi: float = 0.5, a_lo: float = 1e-6) -> float:
    """Binary search for the largest a in (a_lo, a_hi] at which the sampled
    polynomial still changes sign; returns a_lo if none is found anywhere."""

    def has_root(a: float) -> bool:
        return len(fn_of_a_grid(a)) > 0

    if has_root(a_hi):
        return a_hi
    if not has_root(a_lo):
        return a_lo
    lo, hi = a_lo, a_hi
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if has_root(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class RegionReport:
    resolution: int
    curves: dict[str, list[tuple[float, float]]]
    misses: dict[str, int]
    a_c: float
    a_c_width: float
    ordering_ok: bool
    ordering_violations: int
    sign_region_violations: dict[str, int]

    def to_json_dict(self) -> dict:
        return {
            "schema": "gdwell-region-report-v1",
            "config": {"resolution": self.resolution},
            "a_c": self.a_c,
            "a_c_width": self.a_c_width,
            "ordering_ok": self.ordering_ok,
            "ordering_violations": self.ordering_violations,
            "sign_region_violations": dict(self.sign_region_violations),
            "misses": dict(self.misses),
            "curves": {k: [[p, q] for (p, q) in v] for k, v in self.curves.items()},
        }


def trace_curves(resolution: int = 200) -> RegionReport:
    """Trace the zero loci that bound the monotone-convergence region.

    In the (x, a) plane: beta = 0 (exists for a < 1/2) and gamma = 0 (exists
    for small a, at x below the positive root of g1).  In the (z, a) plane
    with z = x^2/a: the zero loci of alpha_tilde, beta_tilde and gamma_tilde.
    Each locus is sampled on a log-spaced a sweep sized so the curve itself
    carries at least `resolution` points; sweep values with no bracketed root
    are recorded as misses, not errors.  Also verifies the stated geometry:
    the beta curve lies above the gamma curve, and just above each tilde
    curve the signs are alpha_tilde < 0, beta_tilde < 0, gamma_tilde > 0.
    """
    if resolution < 50:
        raise ValueError("resolution must be >= 50 samples per curve")
    curves: dict[str, list[tuple[float, float]]] = {}
    misses: dict[str, int] = {}

    # beta = 0: root of 3x^2 + 2a - 1 in x, present exactly when a < 1/2
    pts = []
    miss = 0
    for a in np.geomspace(1e-4, 0.4999, resolution):
        try:
            x_root = _bisect(lambda t: 3.0 * t * t + 2.0 * a - 1.0, 0.0, 1.0)
            pts.append((float(a), x_root))
        except BracketError:
            miss += 1
    curves["beta_zero"] = pts
    misses["beta_zero"] = miss

    # gamma = 0: roots in x on (0, x0); find the largest a carrying a root,
    # then sweep below it
    x_scan = np.linspace(X_G1_ROOT * 1e-3, X_G1_ROOT * 0.9999, 400)

    def gamma_roots(a: float) -> list[float]:
        return _scan_roots(lambda t: gamma_poly(a, t), x_scan)

    a_top = _largest_a_with_root(gamma_roots)
    pts = []
    miss = 0
    for a in np.geomspace(1e-5, a_top, resolution):
        roots = gamma_roots(float(a))
        if not roots:
            miss += 1
        for x_root in roots:
            pts.append((float(a), x_root))
    curves["gamma_zero"] = pts
    misses["gamma_zero"] = miss

    # tilde curves in the (z, a) plane, z = x^2/a
    z_scan = np.geomspace(1e-4, 4.0, 600)
    reduced = {
        "alpha_tilde_zero": lambda a, z: _alpha_tilde_reduced(a, a * z),
        "beta_tilde_zero": lambda a, z: _beta_tilde_reduced(a, a * z),
        "gamma_tilde_zero": lambda a, z: _horner_x2(a * z, gamma_tilde_coeffs(a).tolist()),
    }
    sign_above = {"alpha_tilde_zero": -1.0, "beta_tilde_zero": -1.0, "gamma_tilde_zero": 1.0}
    sign_violations: dict[str, int] = {}
    for name, fn in reduced.items():
        def roots_at(a: float, fn=fn) -> list[float]:
            return _scan_roots(lambda z: fn(a, z), z_scan)

        a_top = _largest_a_with_root(roots_at, a_hi=1.0)
        pts = []
        miss = 0
        bad = 0
        for a in np.geomspace(1e-4, a_top, resolution):
            roots = roots_at(float(a))
            if not roots:
                miss += 1
                continue
            for z_root in roots:
                pts.append((float(a), z_root))
            # just above the outermost root the region sign must hold
            z_top = roots[-1]
            probe = fn(float(a) * 1.05, np.asarray([z_top]))[0]
            if probe * sign_above[name] < 0.0:
                bad += 1
        curves[name] = pts
        misses[name] = miss
        sign_violations[name] = bad

    # geometry of the (x, a) curves: beta curve above gamma curve
    ordering_bad = 0
    for x in np.linspace(X_G1_ROOT * 1e-2, X_G1_ROOT * 0.98, max(resolution, 200)):
        a_beta = (1.0 - 3.0 * x * x) / 2.0
        try:
            a_gamma = _bisect(lambda a: float(gamma_poly(a, x)), 1e-9, 1.0)
        except BracketError:
            ordering_bad += 1
            continue
        if not a_beta > a_gamma:
            ordering_bad += 1

    ac = find_a_c(tol=1e-4)
    return RegionReport(
        resolution=resolution,
        curves=curves,
        misses=misses,
        a_c=ac.a_c,
        a_c_width=ac.width,
        ordering_ok=(ordering_bad == 0),
        ordering_violations=ordering_bad,
        sign_region_violations=sign_violations,
    )
