"""Special functions and quadrature engines.

Normalized Hermite functions (harmonic-oscillator eigenfunctions), Laguerre
polynomials, Bessel J0 and the integration helpers every other module builds
on.  All evaluators are vectorized over numpy arrays and free of global state.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as _integrate
from scipy import special as _special

from .errors import NonConvergence

__all__ = [
    "hermite_functions",
    "laguerre",
    "laguerre_all",
    "laguerre_weighted_all",
    "laguerre_with_derivatives",
    "bessel_j0",
    "QuadratureRule",
    "IntegralResult",
    "finite_rule",
    "semi_infinite_rule",
    "oscillatory_rule",
    "integrate",
    "quad_adaptive",
    "gauss_legendre_panels",
]

_INV_PI_QUARTER = math.pi ** -0.25

_GL_CACHE = {}


def _gl(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = leggauss(order)
    return _GL_CACHE[order]


def gauss_legendre_panels(edges, order=16):
    """Composite Gauss-Legendre nodes/weights on consecutive [edges] panels."""
    edges = np.asarray(edges, dtype=float)
    xs, ws = _gl(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * xs[None, :]).ravel()
    weights = (half * ws[None, :]).ravel()
    return nodes, weights


def hermite_functions(x, k_max):
    """Evaluate the L2-normalized Hermite functions psi_0..psi_{k_max} at x.

    Uses the normalized three-term recurrence

        psi_{k+1}(x) = sqrt(2/(k+1)) x psi_k(x) - sqrt(k/(k+1)) psi_{k-1}(x)

    seeded with psi_0(x) = pi^(-1/4) exp(-x^2/2), which stays well scaled for
    large orders where raw Hermite polynomials overflow.

    Parameters
    ----------
    x : float or ndarray
    k_max : int >= 0

    Returns
    -------
    ndarray of shape (k_max+1,) + shape(x)
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((k_max + 1,) + x.shape, dtype=float)
    out[0] = _INV_PI_QUARTER * np.exp(-0.5 * x * x)
    if k_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, k_max):
        out[k + 1] = (
            math.sqrt(2.0 / (k + 1)) * x * out[k]
            - math.sqrt(k / (k + 1.0)) * out[k - 1]
        )
    return out


def laguerre_all(x, k_max):
    """Laguerre polynomials L_0..L_{k_max} at x via the three-term recurrence."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((k_max + 1,) + x.shape, dtype=float)
    out[0] = np.ones_like(x)
    if k_max >= 1:
        out[1] = 1.0 - x
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1.0)
    return out


def laguerre(k, x):
    """L_k(x) for a single order k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return laguerre_all(x, k)[k]


def laguerre_weighted_all(x, k_max):
    """Exponentially weighted Laguerre functions L_k(x) exp(-x/2).

    The weighted functions are uniformly bounded by 1 on x >= 0, so the
    recurrence stays in range for large k where L_k itself overflows.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((k_max + 1,) + x.shape, dtype=float)
    out[0] = np.exp(-0.5 * x)
    if k_max >= 1:
        out[1] = (1.0 - x) * out[0]
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + 1 - x) * out[k] - k * out[k - 1]) / (k + 1.0)
    return out


def laguerre_with_derivatives(x, k_max):
    """(L_k, L_k', L_k'') for k <= k_max by exact recurrences.

    Derivatives follow from L_k'(x) = L_{k-1}'(x) - L_{k-1}(x) applied
    order by order, so no finite differencing is involved.
    """
    x = np.asarray(x, dtype=float)
    L = laguerre_all(x, k_max)
    dL = np.zeros_like(L)
    ddL = np.zeros_like(L)
    for k in range(1, k_max + 1):
        dL[k] = dL[k - 1] - L[k - 1]
        ddL[k] = ddL[k - 1] - dL[k - 1]
    return L, dL, ddL


def bessel_j0(x):
    """Bessel function of the first kind J0 (relative accuracy ~1e-15)."""
    return _special.j0(x)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float
    refinements: int

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class QuadratureRule:
    """A panelized integration rule with tolerances.

    ``kind`` is one of "finite", "semi_infinite" (exponentially decaying
    integrand, truncated where the supplied envelope is negligible) or
    "oscillatory" (panels no wider than half an oscillation period).
    ``nodes``/``weights`` describe the coarsest panelization; `integrate`
    refines it by doubling the panel count.
    """

    kind: str
    a: float
    b: float
    nodes: np.ndarray
    weights: np.ndarray
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    order: int = 16
    panels: int = 8
    frequency: float = 0.0
    max_refinements: int = 12

    def panel_edges(self, refinement=0):
        return np.linspace(self.a, self.b, (self.panels << refinement) + 1)


def _make_rule(kind, a, b, panels, order, abs_tol, rel_tol, frequency=0.0):
    nodes, weights = gauss_legendre_panels(np.linspace(a, b, panels + 1), order)
    return QuadratureRule(
        kind=kind,
        a=float(a),
        b=float(b),
        nodes=nodes,
        weights=weights,
        abs_tol=abs_tol,
        rel_tol=rel_tol,
        order=order,
        panels=panels,
        frequency=frequency,
    )


def finite_rule(a, b, panels=8, order=16, abs_tol=1e-12, rel_tol=1e-10):
    """Gauss-type rule on a finite interval [a, b]."""
    if not (b > a):
        raise ValueError("need b > a")
    return _make_rule("finite", a, b, panels, order, abs_tol, rel_tol)


def semi_infinite_rule(
    a, envelope, panels=16, order=16, abs_tol=1e-12, rel_tol=1e-10, b_max=1e6
):
    """Rule for integrals over [a, inf) whose integrand decays like `envelope`.

    The domain is truncated at the first point where the (decreasing)
    analytic envelope drops below abs_tol divided by the truncated length.
    """
    b = a + 1.0
    while b < b_max:
        if envelope(b) < abs_tol / max(b - a, 1.0):
            break
        b *= 1.5
    else:
        raise NonConvergence("envelope does not decay below abs_tol before b_max")
    return _make_rule("semi_infinite", a, b, panels, order, abs_tol, rel_tol)


def oscillatory_rule(
    a, b, frequency, order=16, abs_tol=1e-12, rel_tol=1e-10, max_panels=400000
):
    """Rule for integrands oscillating with angular frequency `frequency`.

    Panels are sized to at most half an oscillation period so the fixed
    Gauss order resolves every cycle.
    """
    if not (b > a):
        raise ValueError("need b > a")
    width = (b - a) / 8.0
    if frequency > 0:
        width = min(width, 0.5 * (2.0 * math.pi / frequency))
    panels = int(math.ceil((b - a) / width))
    if panels > max_panels:
        raise NonConvergence("oscillatory rule would need too many panels")
    return _make_rule(
        "oscillatory", a, b, panels, order, abs_tol, rel_tol, frequency=frequency
    )


def integrate(f, rule):
    """Integrate a vectorized callable with nested panel refinement.

    Returns an IntegralResult whose ``error`` is the change produced by the
    last panel doubling.  Raises NonConvergence when the error estimate
    exceeds both abs_tol and rel_tol at the maximum refinement depth.

    ``f`` must accept an ndarray of abscissae and return values of the same
    shape (real or complex).
    """
    prev = np.sum(rule.weights * np.asarray(f(rule.nodes)))
    err = math.inf
    for refinement in range(1, rule.max_refinements + 1):
        nodes, weights = gauss_legendre_panels(
            rule.panel_edges(refinement), rule.order
        )
        cur = np.sum(weights * np.asarray(f(nodes)))
        err = abs(cur - prev)
        if err <= max(rule.abs_tol, rule.rel_tol * abs(cur)):
            return IntegralResult(value=cur, error=err, refinements=refinement)
        prev = cur
    raise NonConvergence(
        f"quadrature on [{rule.a:g}, {rule.b:g}] stalled at error {err:.3e}"
    )


def quad_adaptive(
    f,
    a,
    b,
    abs_tol=1e-12,
    rel_tol=1e-10,
    weight=None,
    wvar=None,
    limit=400,
    points=None,
):
    """Adaptive scalar quadrature (Gauss-Kronrod / Clenshaw-Curtis backend).

    Thin wrapper that enforces this package's error contract: the returned
    error bound must satisfy abs_tol or rel_tol, otherwise NonConvergence is
    raised.  ``weight='cos'``/``'sin'`` selects the oscillatory backend; with
    b = inf it switches to the Fourier-integral backend with series
    acceleration.
    """
    kwargs = dict(epsabs=abs_tol, epsrel=rel_tol, limit=limit, full_output=1)
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
        if math.isinf(b):
            # the Fourier backend ignores epsrel and limit has cycle meaning
            kwargs = dict(
                epsabs=abs_tol, weight=weight, wvar=wvar, limlst=200, full_output=1
            )
    elif points is not None:
        kwargs["points"] = points
    res = _integrate.quad(f, a, b, **kwargs)
    value, err = res[0], res[1]
    if err > max(abs_tol, rel_tol * abs(value)) * 10.0:
        raise NonConvergence(
            f"adaptive quadrature on [{a:g}, {b:g}] error {err:.3e} "
            f"exceeds tolerances (abs {abs_tol:g}, rel {rel_tol:g})"
        )
    return value, err
