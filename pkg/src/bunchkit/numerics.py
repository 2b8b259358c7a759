"""Self-contained scalar numerics: root finding, 1-d minimization, quadrature,
and a Nelder-Mead simplex.

The rest of the package builds on these four primitives instead of an external
optimizer or quadrature library, so every result is deterministic and
auditable end to end.  Plain Python floats only; no array dependencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .errors import MaxDepthExceeded, NonFiniteObjective, NoSignChange

_EPS = 2.220446049250313e-16  # float64 machine epsilon

DEFAULT_XTOL = 1e-12
DEFAULT_FTOL = 1e-10
DEFAULT_INTEGRATE_TOL = 1e-10
MAX_SIMPSON_DEPTH = 50


class Bracket(NamedTuple):
    """Interval [lo, hi] with lo < hi."""

    lo: float
    hi: float


@dataclass(frozen=True)
class OptimResult:
    """Outcome of a simplex minimization."""

    point: tuple[float, ...]
    value: float
    iterations: int
    converged: bool


def _as_bracket(bracket) -> Bracket:
    b = Bracket(float(bracket[0]), float(bracket[1]))
    if not (math.isfinite(b.lo) and math.isfinite(b.hi)) or not b.lo < b.hi:
        raise ValueError(f"invalid bracket {b!r}: need finite lo < hi")
    return b


def find_root(f: Callable[[float], float], bracket, xtol: float = DEFAULT_XTOL) -> float:
    """Root of f inside a sign-change bracket, by Brent's method.

    Bisection guarantees progress; secant and inverse-quadratic steps give
    superlinear convergence when the iterates cooperate.  The result lies in
    a subinterval of width <= xtol (plus a machine-epsilon term) around a
    sign change of f.

    Raises NoSignChange when f(lo) and f(hi) have the same sign and neither
    endpoint is itself a root.
    """
    lo, hi = _as_bracket(bracket)
    fa = f(lo)
    fb = f(hi)
    if not (math.isfinite(fa) and math.isfinite(fb)):
        raise NonFiniteObjective(f"f non-finite at bracket endpoint: f({lo})={fa}, f({hi})={fb}")
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if (fa > 0.0) == (fb > 0.0):
        raise NoSignChange(f"no sign change on [{lo}, {hi}]: f(lo)={fa}, f(hi)={fb}")

    a, b = lo, hi
    c, fc = a, fa
    e = d = b - a
    while True:
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + 0.5 * xtol
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            # forced bisection
            e = d = m
        else:
            s = fb / fa
            if a == c:
                # secant
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                # inverse quadratic interpolation
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            s = e
            e = d
            if 2.0 * p < 3.0 * m * q - abs(tol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                e = d = m
        a, fa = b, fb
        if abs(d) > tol:
            b += d
        elif m > 0.0:
            b += tol
        else:
            b -= tol
        fb = f(b)
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            e = d = b - a


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def minimize_1d(f: Callable[[float], float], bracket, xtol: float = DEFAULT_XTOL) -> float:
    """Golden-section search for the minimizer of a unimodal f on [lo, hi].

    The bracket shrinks by the inverse golden ratio each iteration until its
    width is <= xtol; the midpoint of the final bracket is returned.  Note
    that for smooth minima, floating-point noise limits the usable
    localization to about sqrt(eps) regardless of xtol.

    Raises NonFiniteObjective if f evaluates to nan/inf inside the bracket.
    """
    a, b = _as_bracket(bracket)
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = f(c)
    fd = f(d)
    if not (math.isfinite(fc) and math.isfinite(fd)):
        raise NonFiniteObjective(f"f non-finite inside bracket: f({c})={fc}, f({d})={fd}")
    while h > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
            if not math.isfinite(fc):
                raise NonFiniteObjective(f"f non-finite at {c}: {fc}")
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
            if not math.isfinite(fd):
                raise NonFiniteObjective(f"f non-finite at {d}: {fd}")
    return 0.5 * (a + b)


def _probe(f: Callable[[float], float], x: float):
    """f(x) as a finite float, or None when it raises or is non-finite."""
    try:
        v = f(x)
    except (ValueError, ArithmeticError):
        return None
    if not math.isfinite(v):
        return None
    return v


def _simpson_recurse(g, a, b, fa, fm, fb, whole, tol, tol0, floor, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = g(lm)
    frm = g(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    # floor is the rounding-noise scale of the whole integral: once the
    # split tolerance drops beneath it, delta measures evaluation noise
    # (e.g. argument quantization near a mapped singularity), not
    # truncation error, and halving further can only stall
    if abs(delta) <= 15.0 * tol + floor:
        # accept, with one Richardson extrapolation step
        return left + right + delta / 15.0
    if lm <= a or rm >= b:
        # no representable refinement exists inside this panel
        return left + right + delta / 15.0
    if depth >= MAX_SIMPSON_DEPTH:
        if abs(left) + abs(right) <= tol0:
            # the unresolved panel cannot move the result by more than the
            # caller's tolerance; its delta is evaluation noise, typically
            # from arguments quantizing to adjacent doubles near an endpoint
            return left + right + delta / 15.0
        raise MaxDepthExceeded(
            f"adaptive Simpson hit depth {MAX_SIMPSON_DEPTH} on [{a}, {b}] without reaching tol"
        )
    return _simpson_recurse(
        g, a, m, fa, flm, fm, left, 0.5 * tol, tol0, floor, depth + 1
    ) + _simpson_recurse(g, m, b, fm, frm, fb, right, 0.5 * tol, tol0, floor, depth + 1)


def _adaptive_simpson(g, a, b, tol):
    fa = g(a)
    fm = g(0.5 * (a + b))
    fb = g(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    floor = 50.0 * _EPS * abs(whole)
    return _simpson_recurse(g, a, b, fa, fm, fb, whole, tol, tol, floor, 0)


def integrate(
    f: Callable[[float], float], lo: float, hi: float, tol: float = DEFAULT_INTEGRATE_TOL
) -> float:
    """Definite integral of f over [lo, hi] by adaptive Simpson quadrature.

    The recursion splits the tolerance between halves and applies one
    Richardson extrapolation per accepted panel, so the absolute error is
    held near tol for smooth integrands.

    Integrable endpoint singularities are supported: when f raises or is
    non-finite at an endpoint, the integral is rewritten through the septic
    smoothstep w(t) = 35t^4 - 84t^5 + 70t^6 - 20t^7 (whose derivative
    vanishes to third order at both ends), which turns x^(s-1) blow-ups with
    s >= 1/2 into bounded integrands before the same Simpson recursion runs.

    Raises MaxDepthExceeded when the recursion depth limit (50) is hit, e.g.
    for non-integrable singularities.
    """
    lo = float(lo)
    hi = float(hi)
    if lo == hi:
        return 0.0
    if lo > hi:
        return -integrate(f, hi, lo, tol)
    f_lo = _probe(f, lo)
    f_hi = _probe(f, hi)
    if f_lo is None or f_hi is None:
        span = hi - lo

        def g(t: float) -> float:
            if t <= 0.0 or t >= 1.0:
                return 0.0
            # w is the septic smoothstep; its symmetry w(t) = 1 - w(1-t)
            # gives the small complementary branch directly, avoiding the
            # catastrophic cancellation of 1 - w near t = 1 that would
            # otherwise poison (hi - x) inside f
            if t <= 0.5:
                w = (((-20.0 * t + 70.0) * t - 84.0) * t + 35.0) * t**4
                x = lo + span * w
            else:
                s = 1.0 - t
                wc = (((-20.0 * s + 70.0) * s - 84.0) * s + 35.0) * s**4
                x = hi - span * wc
            dw = 140.0 * (t * (1.0 - t)) ** 3
            if x <= lo or x >= hi:
                return 0.0
            fx = _probe(f, x)
            if fx is None:
                # rounding pushed x onto the singular endpoint; the true
                # contribution there is annihilated by dw -> 0
                return 0.0
            return fx * span * dw

        return _adaptive_simpson(g, 0.0, 1.0, tol)
    fm = f(0.5 * (lo + hi))
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * fm + f_hi)
    floor = 50.0 * _EPS * abs(whole)
    return _simpson_recurse(f, lo, hi, f_lo, fm, f_hi, whole, tol, tol, floor, 0)


def nelder_mead(
    f: Callable[[Sequence[float]], float],
    start: Sequence[float],
    scale: Sequence[float] | None = None,
    maxiter: int = 2000,
    ftol: float = DEFAULT_FTOL,
) -> OptimResult:
    """Nelder-Mead simplex minimization of f: R^n -> R.

    Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
    Convergence means the spread max(f_i) - min(f_i) over the simplex drops
    below ftol; after the first convergence the simplex is rebuilt around
    the best point at the original scale and run to convergence again, which
    guards against a prematurely collapsed simplex.  converged=True is
    reported only if the restarted run converges within the shared maxiter
    budget.

    scale gives the initial per-coordinate simplex steps; when omitted it
    defaults to 0.1 * (1 + |start_i|).

    Raises NonFiniteObjective if f is non-finite at the start point.
    """
    x0 = tuple(float(v) for v in start)
    n = len(x0)
    if n < 1:
        raise ValueError("start must have at least one coordinate")
    if scale is None:
        steps = tuple(0.1 * (1.0 + abs(v)) for v in x0)
    else:
        steps = tuple(float(s) for s in scale)
        if len(steps) != n:
            raise ValueError(f"scale has {len(steps)} entries for {n} coordinates")

    def eval_f(x: tuple[float, ...]) -> float:
        v = f(x)
        return v if v == v else math.inf  # nan sorts as worst

    f0 = f(x0)
    if not math.isfinite(f0):
        raise NonFiniteObjective(f"objective non-finite at start point {x0}: {f0}")

    used = 0

    def run(best: tuple[float, ...], fbest: float):
        nonlocal used
        verts = [list(best)]
        vals = [fbest]
        for i in range(n):
            p = list(best)
            p[i] += steps[i]
            verts.append(p)
            vals.append(eval_f(tuple(p)))
        while True:
            order = sorted(range(n + 1), key=lambda i: vals[i])
            verts = [verts[i] for i in order]
            vals = [vals[i] for i in order]
            spread = vals[-1] - vals[0]
            if spread < ftol:
                return verts[0], vals[0], True
            if used >= maxiter:
                return verts[0], vals[0], False
            used += 1
            centroid = [sum(v[j] for v in verts[:-1]) / n for j in range(n)]
            worst = verts[-1]
            refl = [centroid[j] + (centroid[j] - worst[j]) for j in range(n)]
            f_refl = eval_f(tuple(refl))
            if vals[0] <= f_refl < vals[-2]:
                verts[-1], vals[-1] = refl, f_refl
            elif f_refl < vals[0]:
                expa = [centroid[j] + 2.0 * (centroid[j] - worst[j]) for j in range(n)]
                f_expa = eval_f(tuple(expa))
                if f_expa < f_refl:
                    verts[-1], vals[-1] = expa, f_expa
                else:
                    verts[-1], vals[-1] = refl, f_refl
            else:
                cont = [centroid[j] + 0.5 * (worst[j] - centroid[j]) for j in range(n)]
                f_cont = eval_f(tuple(cont))
                if f_cont < vals[-1]:
                    verts[-1], vals[-1] = cont, f_cont
                else:
                    for i in range(1, n + 1):
                        verts[i] = [
                            verts[0][j] + 0.5 * (verts[i][j] - verts[0][j]) for j in range(n)
                        ]
                        vals[i] = eval_f(tuple(verts[i]))

    best, fbest, ok = run(x0, f0)
    if ok:
        # restart once from the best point before trusting convergence
        best2, fbest2, ok = run(tuple(best), fbest)
        if fbest2 <= fbest:
            best, fbest = best2, fbest2
    return OptimResult(point=tuple(best), value=fbest, iterations=used, converged=ok)
