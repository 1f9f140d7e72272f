"""Scalar and vectorised numerical kernels: adaptive Simpson quadrature,
safeguarded bisection/Newton root finding and Richardson-extrapolated
central differences.

All routines are pure functions; nothing here knows about gas dynamics.
"""
import math

import numpy as np

from .errors import QuadratureFailure, RootFindingFailure

TOL_QUAD = 1e-10
MAX_LEVELS = 60
# Relative floor below which double precision cannot resolve a Simpson
# correction anyway.
_REL_FLOOR = 1e-14

XTOL_ROOT = 1e-14
TOL_ROOT = 1e-12
_MAX_BISECT = 400


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a, b, tol=TOL_QUAD, max_levels=MAX_LEVELS):
    """Integrate ``f`` over ``[a, b]`` with adaptive Simpson refinement.

    The sign convention follows the oriented integral, so ``b < a`` returns
    the negative of the integral over ``[b, a]``.

    Parameters
    ----------
    f : callable
        Scalar integrand, called with Python floats.
    a, b : float
        Integration limits.
    tol : float
        Absolute error target for the whole interval.
    max_levels : int
        Maximum bisection depth of any sub-interval.

    Raises
    ------
    QuadratureFailure
        If some sub-interval is still unconverged at ``max_levels``.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    fa = f(a)
    fb = f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    floor = _REL_FLOOR * abs(whole)

    def refine(a, fa, b, fb, m, fm, whole, tol, level):
        lm, flm, left = _simpson(f, a, fa, m, fm)
        rm, frm, right = _simpson(f, m, fm, b, fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * max(tol, floor):
            return left + right + delta / 15.0
        if level >= max_levels or abs(b - a) <= 4.0 * math.ulp(max(abs(a), abs(b))):
            raise QuadratureFailure(
                f"adaptive Simpson did not reach tol={tol:.3g} on [{a}, {b}] "
                f"after {level} levels")
        return (refine(a, fa, m, fm, lm, flm, left, 0.5 * tol, level + 1)
                + refine(m, fm, b, fb, rm, frm, right, 0.5 * tol, level + 1))

    return refine(a, fa, b, fb, m, fm, whole, tol, 1)


def integrate_pieces(f, a, b, breakpoints=(), tol=TOL_QUAD):
    """Adaptive Simpson over ``[a, b]`` split at interior ``breakpoints``.

    Splitting at kinks of ``f`` (e.g. spline knots) keeps every piece smooth.
    The tolerance is shared evenly between pieces.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = [a] + sorted(x for x in breakpoints if a < x < b) + [b]
    piece_tol = tol / (len(cuts) - 1)
    total = math.fsum(adaptive_simpson(f, lo, hi, piece_tol)
                      for lo, hi in zip(cuts[:-1], cuts[1:]))
    return sign * total


def bisect_newton(f, lo, hi, fprime=None, xtol=XTOL_ROOT, polish=2):
    """Root of a scalar function bracketed by ``[lo, hi]``.

    Bisection shrinks the bracket to width ``xtol`` (or a few ulps, whichever
    is larger), then up to ``polish`` Newton steps are taken from the best
    end point. A Newton iterate is kept only if it stays inside the last
    bracket and lowers ``|f|``.

    Raises
    ------
    RootFindingFailure
        If ``f(lo)`` and ``f(hi)`` have the same strict sign.
    """
    lo = float(lo)
    hi = float(hi)
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise RootFindingFailure(
            f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    for _ in range(_MAX_BISECT):
        if hi - lo <= max(xtol, 4.0 * math.ulp(max(abs(lo), abs(hi)))):
            break
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    x, fx = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    if fprime is None:
        return x
    for _ in range(polish):
        d = fprime(x)
        if d == 0.0 or not math.isfinite(d):
            break
        x_new = x - fx / d
        if not lo <= x_new <= hi:
            break
        f_new = f(x_new)
        if abs(f_new) > abs(fx):
            break
        x, fx = x_new, f_new
        if fx == 0.0:
            break
    return x


def bisect_newton_array(f, lo, hi, fprime=None, xtol=XTOL_ROOT, polish=2):
    """Elementwise version of :func:`bisect_newton` for monotone families.

    ``f(x)`` must accept and return arrays broadcast with ``lo``/``hi``. Each
    element is bracketed independently; elements without a sign change raise.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo = lo.copy()
    hi = hi.copy()
    if lo.size == 0:
        return lo
    flo = np.asarray(f(lo), dtype=float)
    fhi = np.asarray(f(hi), dtype=float)
    bad = (np.sign(flo) == np.sign(fhi)) & (flo != 0.0) & (fhi != 0.0)
    if np.any(bad):
        i = np.flatnonzero(bad)[0]
        raise RootFindingFailure(
            f"no sign change on [{lo.flat[i]!r}, {hi.flat[i]!r}]")
    # exact end-point roots are returned as they are
    at_lo = flo == 0.0
    at_hi = (fhi == 0.0) & ~at_lo
    lo0, hi0 = lo.copy(), hi.copy()
    up = (flo < 0.0) | (fhi > 0.0)  # f increases from lo to hi
    for _ in range(_MAX_BISECT):
        width = hi - lo
        limit = np.maximum(xtol, 4.0 * np.spacing(np.maximum(np.abs(lo), np.abs(hi))))
        active = (width > limit) & ~at_lo & ~at_hi
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        fmid = np.asarray(f(mid), dtype=float)
        go_right = np.where(up, fmid < 0.0, fmid > 0.0)
        lo = np.where(active & go_right, mid, lo)
        hi = np.where(active & ~go_right, mid, hi)
    flo = np.asarray(f(lo), dtype=float)
    fhi = np.asarray(f(hi), dtype=float)
    use_lo = np.abs(flo) <= np.abs(fhi)
    x = np.where(use_lo, lo, hi)
    fx = np.where(use_lo, flo, fhi)
    if fprime is None:
        return np.where(at_lo, lo0, np.where(at_hi, hi0, x))
    for _ in range(polish):
        d = np.asarray(fprime(x), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_new = x - fx / d
        ok = np.isfinite(x_new) & (x_new >= lo) & (x_new <= hi)
        x_try = np.where(ok, x_new, x)
        f_try = np.asarray(f(x_try), dtype=float)
        keep = ok & (np.abs(f_try) <= np.abs(fx))
        x = np.where(keep, x_try, x)
        fx = np.where(keep, f_try, fx)
    return np.where(at_lo, lo0, np.where(at_hi, hi0, x))


def central_difference(f, x, h):
    """Second-order central difference of ``f`` at ``x`` with step ``h``."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def richardson_derivative(f, x, h):
    """Fourth-order derivative estimate from central differences at h and 2h."""
    d1 = central_difference(f, x, h)
    d2 = central_difference(f, x, 2.0 * h)
    return (4.0 * d1 - d2) / 3.0


def second_difference(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def richardson_second_difference(f, x, h):
    """Second derivative, ``(4 D(h) - D(2h)) / 3`` with D the central stencil.

    Fourth-order accurate, which permits a larger ``h`` and so less
    cancellation when ``f`` is dominated by a linear part.
    """
    return (4.0 * second_difference(f, x, h) - second_difference(f, x, 2.0 * h)) / 3.0


def stable_sum(values):
    """Compensated, order-fixed sum of an array (row-major sweep)."""
    return math.fsum(np.ravel(np.asarray(values, dtype=float)).tolist())
