"""Scalar special functions and adaptive quadrature primitives.

Everything here is pure and reentrant; no module-level mutable state.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

__all__ = [
    "QuadratureSpec",
    "QuadratureError",
    "TailBoundError",
    "q_function",
    "integrate",
    "integrate_semi_infinite",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for the adaptive integrators."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 1 << 20

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(RuntimeError):
    """Subdivision budget exhausted before the requested tolerance was met.

    Carries the best available estimate and its error bound so callers can
    decide whether the partial result is usable.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class TailBoundError(RuntimeError):
    """The tail bound of a semi-infinite integral never fell below tolerance."""


def q_function(x: float) -> float:
    """Upper-tail probability of the standard normal distribution.

    Defers to the libm complementary error function (rational approximation
    accurate to ~1 ulp over the useful range, asymptotic beyond), so the
    result is far more accurate than any quadrature tolerance used here.
    Accepts +-inf as limits: Q(+inf) = 0, Q(-inf) = 1.  NaN is rejected.
    """
    if math.isnan(x):
        raise ValueError("q_function: NaN input")
    return 0.5 * math.erfc(x / _SQRT2)


# Gauss-Kronrod 7-15 abscissae/weights on [-1, 1] (QUADPACK constants).
# Shared nodes carry both a Gauss and a Kronrod weight.
_GK_SHARED = (
    (0.949107912342758524526189684047851,
     0.129484966168869693270611432679082,
     0.063092092629978553290700663189204),
    (0.741531185599394439863864773280788,
     0.279705391489276667901467771423780,
     0.140653259715525918745189590510238),
    (0.405845151377397166906606412076961,
     0.381830050505118944950369775488975,
     0.190350578064785409913256402421014),
)
_GK_KRONROD_ONLY = (
    (0.991455371120812639206854697526329, 0.022935322010529224963732008058970),
    (0.864864423359769072789712788640926, 0.104790010322250183839876322541518),
    (0.586087235467691130294144838258730, 0.169004726639267902826583426598550),
    (0.207784955007898467600689403773245, 0.204432940075298892414161999234649),
)
_GK_CENTER = (0.417959183673469387755102040816327,
              0.209482141084727828012999174891714)


def _kronrod15(f, a: float, b: float) -> tuple[float, float]:
    """One G7/K15 panel over [a, b]: returns (K15 estimate, error estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    resg = _GK_CENTER[0] * fc
    resk = _GK_CENTER[1] * fc
    for x, wg, wk in _GK_SHARED:
        s = f(c - h * x) + f(c + h * x)
        resg += wg * s
        resk += wk * s
    for x, wk in _GK_KRONROD_ONLY:
        resk += wk * (f(c - h * x) + f(c + h * x))
    diff = abs(resk - resg) * abs(h)
    # QUADPACK-style sharpening: K15 converges much faster than |K-G|.
    err = min(diff, (200.0 * diff) ** 1.5) if diff > 0.0 else 0.0
    return resk * h, err


def integrate(f, a: float, b: float,
              spec: QuadratureSpec = DEFAULT_QUADRATURE,
              initial_subdivisions: int = 1) -> float:
    """Adaptive Gauss-Kronrod integration of ``f`` over [a, b].

    The result satisfies |result - true| <= max(abs_tol, rel_tol * |result|)
    to the extent the local error estimates hold.  Deterministic for fixed
    inputs.  Raises :class:`QuadratureError` (carrying the best estimate and
    its bound) if ``spec.max_subdivisions`` subintervals are not enough.
    """
    if math.isnan(a) or math.isnan(b):
        raise ValueError("integrate: NaN endpoint")
    if a > b:
        raise ValueError("integrate: requires a <= b")
    if a == b:
        return 0.0

    n0 = max(1, min(initial_subdivisions, spec.max_subdivisions))
    heap = []  # entries: (-err, seq, lo, hi, value, err)
    seq = 0
    total = 0.0
    total_err = 0.0
    for i in range(n0):
        lo = a + (b - a) * (i / n0)
        hi = b if i == n0 - 1 else a + (b - a) * ((i + 1) / n0)
        v, e = _kronrod15(f, lo, hi)
        heapq.heappush(heap, (-e, seq, lo, hi, v, e))
        seq += 1
        total += v
        total_err += e
    frozen_val = 0.0  # intervals at floating-point resolution
    frozen_err = 0.0
    count = n0

    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if not heap:
            raise QuadratureError(
                "integration stalled at floating-point resolution "
                f"(estimate {total!r}, error bound {total_err!r})",
                total, total_err)
        if count >= spec.max_subdivisions:
            raise QuadratureError(
                f"integration did not converge within {spec.max_subdivisions} "
                f"subdivisions (estimate {total!r}, error bound {total_err!r})",
                total, total_err)
        _, _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            frozen_val += v
            frozen_err += e
            continue
        v1, e1 = _kronrod15(f, lo, mid)
        v2, e2 = _kronrod15(f, mid, hi)
        count += 1
        heapq.heappush(heap, (-e1, seq, lo, mid, v1, e1))
        seq += 1
        heapq.heappush(heap, (-e2, seq, mid, hi, v2, e2))
        seq += 1
        total += (v1 + v2) - v
        total_err += (e1 + e2) - e
    return total


def integrate_semi_infinite(f, a: float, tail_bound,
                            spec: QuadratureSpec = DEFAULT_QUADRATURE,
                            initial_subdivisions: int = 1) -> float:
    """Integrate ``f`` over [a, inf) given a proven bound on |tail integrals|.

    ``tail_bound(x)`` must bound |integral of f over [x, inf)| and decrease
    to zero.  The domain is truncated at the first point of the doubling grid
    a + 2^k where the bound drops below ``spec.abs_tol``, then handed to
    :func:`integrate`.  Raises :class:`TailBoundError` if no such point
    exists below 1e6 * a + 1e6.
    """
    limit = 1e6 * a + 1e6
    step = 1.0
    b = a + step
    while not (tail_bound(b) < spec.abs_tol):
        step *= 2.0
        b = a + step
        if b > limit:
            raise TailBoundError(
                f"tail bound still {tail_bound(b)!r} at {b!r}; "
                "integral may diverge or the bound is too weak")
    return integrate(f, a, b, spec, initial_subdivisions)
