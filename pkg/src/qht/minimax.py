"""Hardest one-parameter family for the pointwise lower bound.

The family perturbs the heavy-tailed rotation-invariant state W(alpha) by a
smooth-cutoff bump g_a,

    W_c = W(alpha) + c g_a,   |c| <= C_a = q / (sqrt(a) (log a)^{3/2}),

where g_a has radial Fourier profile (1/4 pi) |w| / (1 + sinh^2(beta |w|)/a)
and its line integrals equal the one-dimensional kernel

    h_a(s) = (1/4 pi^2) Integral_0^inf r cos(s r) / (1 + sinh^2(beta r)/a) dr.

Legality as a quantum state reduces to nonnegativity of the perturbed
photon-number distribution rho_kk(alpha) + c tau_kk(a); the module computes
all ingredients (densities, Fisher information, Bayesian Cramer-Rao bound)
by controlled quadrature.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .errors import (
    DomainError,
    NonConvergence,
    NonpositiveDensity,
    PositivityViolation,
)
from .specfun import (
    bessel_j0,
    finite_rule,
    gauss_legendre_panels,
    integrate,
    oscillatory_rule,
    quad_adaptive,
)
from .states import alpha_diagonal_all

__all__ = [
    "c_star",
    "r_n_squared",
    "smooth_cutoff",
    "p_alpha",
    "p_alpha_many",
    "charfn_alpha",
    "charfn_alpha_many",
    "h_a",
    "g_a_point",
    "tau_diag",
    "tau_diag_all",
    "tau_tail_bound",
    "HardestFamily",
    "hardest_diag",
    "hardest_diag_all",
    "positivity_scan",
    "r0",
    "dual_radon_alpha",
    "wigner_alpha_point",
    "FisherEvaluator",
    "fisher_info",
    "fisher_info_2d",
    "int_h_squared",
    "mehler_sum",
    "mehler_rhs",
    "class_norm_alpha",
    "class_norm_perturbation",
    "VanTreesConfig",
    "van_trees_report",
    "hardest_report",
]


def c_star(beta):
    """Leading risk constant pi / (3 (4 pi beta)^3)."""
    return math.pi / (3.0 * (4.0 * math.pi * beta) ** 3)


def r_n_squared(n, beta, dual_radon_value):
    """Squared pointwise rate: c_star * R#R[W](z) * (log n)^3 / n."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return c_star(beta) * dual_radon_value * math.log(n) ** 3 / n


def smooth_cutoff(r, a, beta):
    """S(r) = 1 / (1 + sinh(beta r)^2 / a), overflow-safe for large r."""
    r_ = np.abs(np.asarray(r, dtype=float))
    br = beta * r_
    sh = np.sinh(np.minimum(br, 20.0))
    out = np.where(br < 20.0, 1.0 / (1.0 + sh * sh / a), expit(math.log(4.0 * a) - 2.0 * br))
    return float(out) if np.ndim(r) == 0 else out


def _check_alpha01(alpha):
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")


# ---------------------------------------------------------------------------
# the unperturbed family: density, characteristic function, line averages


def _p_alpha_z_integrand(alpha, x):
    """Integrand of the z-form after the measure-flattening substitution.

    With s = (1-z)^alpha, alpha (1-z)^(alpha-1) dz = ds exactly, leaving

        p(x) = Integral_0^1 sqrt((1-z)/(pi (1+z))) exp(-x^2 (1-z)/(1+z)) ds.
    """

    def f(s):
        om = s ** (1.0 / alpha)  # 1 - z
        opz = 2.0 - om  # 1 + z
        return np.sqrt(om / (math.pi * opz)) * np.exp(-x * x * om / opz)

    return f


def p_alpha(alpha, x, form="z"):
    """Phase-independent sampling density of the alpha state at x.

    Two integral representations are available: ``form='z'`` integrates over
    the mixing variable, ``form='u'`` uses the equivalent

        p(x) = (alpha 2^(alpha+1) x / sqrt(pi)) *
               Integral_0^x u^(2 alpha) (u^2+x^2)^-(alpha+1) exp(-u^2) du

    valid for x != 0.  Both are evaluated adaptively and agree to ~1e-12.
    """
    _check_alpha01(alpha)
    x = abs(float(x))
    if form == "z":
        val, _ = quad_adaptive(
            _p_alpha_z_integrand(alpha, x), 0.0, 1.0, abs_tol=1e-13, rel_tol=1e-11
        )
        return val
    if form == "u":
        if x == 0.0:
            raise DomainError("the u-form representation needs x != 0")

        def f(u):
            return (
                u ** (2.0 * alpha)
                * (u * u + x * x) ** (-(alpha + 1.0))
                * math.exp(-u * u)
            )

        val, _ = quad_adaptive(f, 0.0, x, abs_tol=1e-15, rel_tol=1e-11)
        return alpha * 2.0 ** (alpha + 1.0) * x * val / math.sqrt(math.pi)
    raise DomainError(f"unknown p_alpha form {form!r}")


def _graded_unit_panels(n_panels, order=16):
    """Geometrically graded panels on [0, 1].

    The mixing integrals develop boundary layers at s -> 0 whose width
    depends on the evaluation point; log-spaced panels resolve every layer
    scale at once.
    """
    edges = np.concatenate([[0.0], np.geomspace(1e-14, 1.0, n_panels)])
    return gauss_legendre_panels(edges, order)


def p_alpha_many(alpha, x, abs_tol=1e-12, rel_tol=1e-10):
    """Vectorized z-form density at an array of points (alpha <= 1/2 fast path)."""
    _check_alpha01(alpha)
    x_arr = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    if alpha > 0.5:
        out = np.array([p_alpha(alpha, xv) for xv in x_arr])
        return out[0] if np.ndim(x) == 0 else out.reshape(np.shape(x))

    def pass_at(n_panels):
        s_nodes, s_w = _graded_unit_panels(n_panels)
        om = s_nodes ** (1.0 / alpha)
        opz = 2.0 - om
        base = np.sqrt(om / (math.pi * opz)) * s_w
        # exp(-x^2 om/opz) over (x, s); chunk x to bound memory
        out = np.empty(x_arr.size)
        ratio = om / opz
        for lo in range(0, x_arr.size, 4096):
            xs = x_arr[lo : lo + 4096, None]
            out[lo : lo + 4096] = np.exp(-xs * xs * ratio[None, :]) @ base
        return out

    prev = pass_at(32)
    for n_panels in (64, 128, 256):
        cur = pass_at(n_panels)
        if float(np.max(np.abs(cur - prev))) <= max(
            abs_tol, rel_tol * float(np.max(np.abs(cur)))
        ):
            return cur[0] if np.ndim(x) == 0 else cur.reshape(np.shape(x))
        prev = cur
    raise NonConvergence("density quadrature for the alpha family stalled")


def charfn_alpha(alpha, r, form="auto"):
    """Radial characteristic function of the alpha state.

    z-form: Integral_0^1 alpha (1-z)^(alpha-1) exp(-r^2 (1+z)/(4(1-z))) dz,
    evaluated after s = (1-z)^alpha.  For larger radii the equivalent
    exponential-tail form (substituting v = r^2 (1+z)/(4(1-z)))

        alpha 2^(alpha+2) r^(2 alpha) Integral_{r^2/4}^inf
            e^-v (4 v + r^2)^-(1+alpha) dv

    is better conditioned.  ``form='auto'`` switches at r = 2.
    """
    _check_alpha01(alpha)
    r = abs(float(r))
    if r == 0.0:
        return 1.0
    if form == "auto":
        form = "z" if r <= 2.0 else "v"
    if form == "z":

        def f(s):
            om = s ** (1.0 / alpha)
            return np.exp(-r * r * (2.0 - om) / (4.0 * om))

        val, _ = quad_adaptive(f, 0.0, 1.0, abs_tol=1e-14, rel_tol=1e-11)
        return val
    if form == "v":

        def f(v):
            return math.exp(-v) * (4.0 * v + r * r) ** (-(1.0 + alpha))

        val, _ = quad_adaptive(
            f, r * r / 4.0, np.inf, abs_tol=1e-16, rel_tol=1e-11, limit=400
        )
        return alpha * 2.0 ** (alpha + 2.0) * r ** (2.0 * alpha) * val
    raise DomainError(f"unknown charfn_alpha form {form!r}")


def charfn_alpha_many(alpha, r, abs_tol=1e-12):
    """Vectorized z-form characteristic function at an array of radii."""
    _check_alpha01(alpha)
    r_arr = np.abs(np.atleast_1d(np.asarray(r, dtype=float)))

    def pass_at(n_panels):
        s_nodes, s_w = _graded_unit_panels(n_panels)
        om = s_nodes ** (1.0 / alpha)
        ratio = (2.0 - om) / (4.0 * om)
        out = np.empty(r_arr.size)
        for lo in range(0, r_arr.size, 4096):
            rs = r_arr[lo : lo + 4096, None]
            out[lo : lo + 4096] = np.exp(-rs * rs * ratio[None, :]) @ s_w
        return out

    prev = pass_at(32)
    for n_panels in (64, 128, 256):
        cur = pass_at(n_panels)
        if float(np.max(np.abs(cur - prev))) <= abs_tol:
            out = cur
            break
        prev = cur
    else:
        raise NonConvergence("characteristic-function quadrature stalled")
    out = np.where(r_arr == 0.0, 1.0, out)
    return out[0] if np.ndim(r) == 0 else out.reshape(np.shape(r))


def r0(alpha):
    """Line average of the alpha state through the origin.

    R0 = 2 sqrt(pi) alpha Integral_0^1 (1-z)^(alpha-1/2) (1+z)^(-1/2) dz,
    which also equals 2 pi p_alpha(0) by rotation invariance.
    """
    _check_alpha01(alpha)

    def f(z):
        return (1.0 - z) ** (alpha - 0.5) * (1.0 + z) ** (-0.5)

    val, _ = quad_adaptive(f, 0.0, 1.0, abs_tol=1e-14, rel_tol=1e-12)
    return 2.0 * math.sqrt(math.pi) * alpha * val


def dual_radon_alpha(alpha, z, abs_tol=1e-10, max_doublings=10):
    """Dual-Radon average of the alpha state at z via its analytic density."""
    q, p = float(z[0]), float(z[1])
    m = 64
    phi = np.arange(m) * (2.0 * math.pi / m)
    prev = (2.0 * math.pi / m) * float(
        np.sum(p_alpha_many(alpha, q * np.cos(phi) + p * np.sin(phi)))
    )
    for _ in range(max_doublings):
        m *= 2
        phi = np.arange(m) * (2.0 * math.pi / m)
        cur = (2.0 * math.pi / m) * float(
            np.sum(p_alpha_many(alpha, q * np.cos(phi) + p * np.sin(phi)))
        )
        if abs(cur - prev) <= max(abs_tol, 1e-9 * abs(cur)):
            return cur
        prev = cur
    raise NonConvergence("dual-Radon average for the alpha family stalled")


def wigner_alpha_point(alpha, z):
    """Wigner function of the alpha state by radial Fourier inversion."""
    radius = math.hypot(float(z[0]), float(z[1]))

    def f(t):
        return t * charfn_alpha_many(alpha, t) * bessel_j0(t * radius)

    rule = finite_rule(0.0, 16.0, panels=max(24, int(4 * radius) + 24), abs_tol=1e-12)
    return float(integrate(f, rule).value) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# the perturbation: 1-D kernel, 2-D bump, photon-number increments


def _r_cutoff(a, beta, log_tol=34.5):
    """Radius where r * S(r) has decayed below exp(-log_tol) * 4a-scale."""
    r = 10.0 / beta
    for _ in range(4):
        r = (math.log(4.0 * a) + math.log(max(r, 1.0)) + log_tol) / (2.0 * beta)
    return r


def h_a(a, beta, s):
    """One-dimensional kernel h_a(s) = (1/4 pi^2) Int_0^inf r S(r) cos(s r) dr."""
    if not a > 1:
        raise DomainError("a must exceed 1")
    if not beta > 0:
        raise DomainError("beta must be positive")
    rcut = _r_cutoff(a, beta)

    def f(r):
        return r * smooth_cutoff(r, a, beta) / (4.0 * math.pi**2)

    s = abs(float(s))
    # the absolute floor scales with the domain length: a range-300 highly
    # oscillatory integral cannot reach 1e-13 in double precision
    abs_tol = 1e-12 * max(1.0, rcut / 30.0)
    if s == 0.0:
        val, _ = quad_adaptive(f, 0.0, rcut, abs_tol=abs_tol, rel_tol=1e-11, limit=800)
    else:
        val, _ = quad_adaptive(
            f, 0.0, rcut, abs_tol=abs_tol, rel_tol=1e-11, weight="cos", wvar=s, limit=2000
        )
    return val


def g_a_point(a, beta, z):
    """Radial reduction of the 2-D bump:

    g_a(z) = (1/8 pi^2) Integral_0^inf r^2 S(r) J0(r |z|) dr.
    """
    if not a > 1:
        raise DomainError("a must exceed 1")
    radius = math.hypot(float(z[0]), float(z[1])) if np.ndim(z) else abs(float(z))
    rcut = _r_cutoff(a, beta, log_tol=39.0)

    def f(r):
        return r * r * smooth_cutoff(r, a, beta) * bessel_j0(r * radius)

    rule = oscillatory_rule(0.0, rcut, frequency=radius, abs_tol=1e-11, rel_tol=1e-10)
    return float(integrate(f, rule).value) / (8.0 * math.pi**2)


def _tau_quadrature(a, beta, k_max, scale=1.0):
    t_max = math.sqrt(2.0 * k_max) + 20.0
    width = min(0.25, math.pi / (2.0 * math.sqrt(2.0 * k_max + 1.0))) / scale
    n_panels = int(math.ceil(t_max / width))
    return gauss_legendre_panels(np.linspace(0.0, t_max, n_panels + 1), 16)


def _tau_pass(a, beta, k_max, scale):
    nodes, wts = _tau_quadrature(a, beta, k_max, scale)
    s = 0.5 * nodes * nodes
    base = wts * nodes * nodes * smooth_cutoff(nodes, a, beta) / (4.0 * math.pi)
    out = np.empty(k_max + 1)
    l_prev = np.exp(-0.5 * s)
    out[0] = float(base @ l_prev)
    if k_max == 0:
        return out
    l_cur = (1.0 - s) * l_prev
    out[1] = float(base @ l_cur)
    for k in range(1, k_max):
        l_prev, l_cur = l_cur, ((2 * k + 1 - s) * l_cur - k * l_prev) / (k + 1.0)
        out[k + 1] = float(base @ l_cur)
    return out


def tau_diag_all(a, beta, k_max):
    """Photon-number increments tau_kk of the bump for k = 0..k_max.

    tau_kk = (1/4 pi) Int_0^inf L_k(t^2/2) e^{-t^2/4} t^2 S(t) dt, evaluated
    on panels fine enough for the Laguerre oscillation (wavelength
    ~2 pi / sqrt(2k)); a 1.4x-resolution pass guards the result.
    """
    if not a > 1:
        raise DomainError("a must exceed 1")
    coarse = _tau_pass(a, beta, k_max, 1.0)
    fine = _tau_pass(a, beta, k_max, 1.4)
    if float(np.max(np.abs(coarse - fine))) > 1e-10:
        raise NonConvergence("tau quadrature did not stabilize")
    return fine


def tau_diag(a, beta, k):
    if k < 0:
        raise DomainError("k must be >= 0")
    return float(tau_diag_all(a, beta, k)[k])


def tau_tail_bound(a, beta, dim):
    """Bound on the tau mass beyond the truncation, sum_{k>=dim} |tau_kk|.

    Uses the empirical ceiling of |tau_kk| k^(5/4) over the trailing half of
    the computed range together with the integrated k^(-5/4) tail.
    """
    tau = tau_diag_all(a, beta, dim - 1)
    k = np.arange(1, dim)
    ceiling = float(np.max(np.abs(tau[dim // 2 :]) * k[dim // 2 - 1 :] ** 1.25))
    return 4.0 * ceiling * (dim - 0.5) ** -0.25


def hardest_diag_all(alpha, beta, a, c, dim):
    """Diagonal rho_kk(alpha) + c tau_kk for k < dim (no positivity check)."""
    return alpha_diagonal_all(alpha, dim - 1) + c * tau_diag_all(a, beta, dim - 1)


def positivity_scan(alpha, beta, a, c, dim):
    """Scan the perturbed diagonal for negativity.

    Returns a dict with ``ok``, the first offending index (or None) and the
    minimum entry.  This is a measurement, not a validation: out-of-range
    parameters simply report a violation.
    """
    diag = hardest_diag_all(alpha, beta, a, c, dim)
    neg = np.nonzero(diag < 0.0)[0]
    return {
        "ok": neg.size == 0,
        "first_violation_k": int(neg[0]) if neg.size else None,
        "min_value": float(np.min(diag)),
        "argmin_k": int(np.argmin(diag)),
    }


@dataclass(frozen=True)
class HardestFamily:
    """Legal member of the perturbed family (positivity checked at build)."""

    alpha: float
    beta: float
    a: float
    q_small: float
    c: float
    dim: int = 512

    def __post_init__(self):
        if not (0.0 < self.alpha < 0.25):
            raise DomainError("alpha must lie in (0, 1/4)")
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if not self.a > 1:
            raise DomainError("a must exceed 1")
        if not self.q_small > 0:
            raise DomainError("q_small must be positive")
        if self.dim < 2:
            raise DomainError("dim must be >= 2")
        if abs(self.c) > self.c_max * (1.0 + 1e-12):
            raise DomainError(
                f"|c| = {abs(self.c):.3e} exceeds C_a = {self.c_max:.3e}"
            )
        scan = positivity_scan(self.alpha, self.beta, self.a, self.c, self.dim)
        if not scan["ok"]:
            raise PositivityViolation(scan["first_violation_k"], scan["min_value"])

    @property
    def c_max(self):
        return self.q_small / (math.sqrt(self.a) * math.log(self.a) ** 1.5)

    def diagonal(self):
        return hardest_diag_all(self.alpha, self.beta, self.a, self.c, self.dim)


def hardest_diag(family, k):
    """Single diagonal entry rho_kk(alpha) + c tau_kk of a legal family."""
    if not (0 <= k < family.dim):
        raise DomainError("k out of range for the family truncation")
    return float(family.diagonal()[k])


# ---------------------------------------------------------------------------
# Fisher information and the Bayesian Cramer-Rao report


class FisherEvaluator:
    """Caches h_a and the alpha density on a shared quadrature so that the
    one-parameter Fisher information

        I(c) = Integral h_a(u)^2 / (p_alpha(u) + c h_a(u)) du

    is cheap to evaluate for many c."""

    def __init__(self, alpha, beta, a, u_mid=4.0, u_cross=30.0, u_tail=3e4, fine=1.0):
        _check_alpha01(alpha)
        self.alpha, self.beta, self.a = alpha, beta, a
        t_star = math.log(4.0 * a) / (2.0 * beta)
        w1 = min(0.05, (2.0 * math.pi / t_star) / 4.0) / fine
        w2 = min(0.25, (2.0 * math.pi / t_star) * 1.2) / fine
        edges = np.concatenate(
            [
                np.arange(0.0, u_mid, w1),
                np.arange(u_mid, u_cross, w2),
                np.geomspace(u_cross, u_tail, 49),
            ]
        )
        self.nodes, self.weights = gauss_legendre_panels(edges, 8)
        self.h = np.array([h_a(a, beta, u) for u in self.nodes])
        self.p = p_alpha_many(alpha, self.nodes)

    def info(self, c):
        dens = self.p + c * self.h
        if float(np.min(dens)) <= 0.0:
            raise NonpositiveDensity(
                "perturbed line density is not positive on the integration range"
            )
        return 2.0 * float(np.sum(self.weights * self.h * self.h / dens))

    def int_h_squared_nodes(self):
        """u-space value of Integral h_a^2 du on the shared nodes."""
        return 2.0 * float(np.sum(self.weights * self.h * self.h))


@lru_cache(maxsize=16)
def _evaluator(alpha, beta, a, fine=1.0):
    return FisherEvaluator(alpha, beta, a, fine=fine)


def fisher_info(family):
    """Fisher information I(c) of a legal family member at its own c."""
    ev = _evaluator(family.alpha, family.beta, family.a)
    return ev.info(family.c)


def fisher_info_2d(alpha, beta, a, z=(0.0, 0.0), phi_order=8):
    """Bookkeeping oracle at c = 0: the full phase-averaged Fisher integral

        (1/pi) Int_0^pi dphi Int h^2(u) / p_alpha([z,phi] - u) du

    evaluated without exploiting the rotation invariance that collapses it
    onto the 1-D reduction.
    """
    ev = _evaluator(alpha, beta, a)
    phi_nodes, phi_w = gauss_legendre_panels(np.linspace(0.0, math.pi, 5), phi_order)
    u_full = np.concatenate([-ev.nodes[::-1], ev.nodes])
    h2 = np.concatenate([ev.h[::-1], ev.h]) ** 2
    wts = np.concatenate([ev.weights[::-1], ev.weights])
    q, p = float(z[0]), float(z[1])
    total = 0.0
    for phi, w in zip(phi_nodes, phi_w):
        s = q * math.cos(phi) + p * math.sin(phi)
        dens = p_alpha_many(alpha, np.abs(s - u_full))
        total += w * float(np.sum(wts * h2 / dens))
    return total / math.pi


def int_h_squared(a, beta):
    """Integral of h_a^2 over the line, via the spectral identity

        Int h_a^2(u) du = (1/16 pi^3) Int_0^inf t^2 S(t)^2 dt.
    """
    rcut = _r_cutoff(a, beta, log_tol=39.0)

    def f(t):
        s = smooth_cutoff(t, a, beta)
        return t * t * s * s

    val, _ = quad_adaptive(f, 0.0, rcut, abs_tol=1e-12, rel_tol=1e-11, limit=800)
    return val / (16.0 * math.pi**3)


def int_h_squared_asymptote(a, beta):
    """Large-a model (log a)^3 / (6 (4 pi beta)^3) for Int h_a^2 du."""
    return math.log(a) ** 3 / (6.0 * (4.0 * math.pi * beta) ** 3)


# ---------------------------------------------------------------------------
# identities used to build and certify the family


def mehler_sum(z, x, k_max=300):
    """Partial sum sum_{k<=k_max} z^k psi_k(x)^2 of the generating identity."""
    from .specfun import hermite_functions

    psi = hermite_functions(np.asarray(x, dtype=float), k_max)
    zs = z ** np.arange(k_max + 1)
    return np.tensordot(zs, psi * psi, axes=(0, 0))


def mehler_rhs(z, x):
    """Closed form exp(-x^2 (1-z)/(1+z)) / sqrt(pi (1-z^2))."""
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x * (1.0 - z) / (1.0 + z)) / np.sqrt(
        math.pi * (1.0 - z * z)
    )


def class_norm_alpha(alpha, beta):
    """(1/4 pi^2) Int |Wtilde_alpha|^2 e^{2 beta |w|} dw (radial reduction)."""

    def f(r):
        w = charfn_alpha_many(alpha, r)
        return r * w * w * np.exp(2.0 * beta * r)

    rule = finite_rule(0.0, 60.0, panels=64, abs_tol=1e-12, rel_tol=1e-9)
    return float(integrate(f, rule).value) / (2.0 * math.pi)


def class_norm_perturbation(a, beta, c):
    """(c^2/4 pi^2) Int |gtilde_a|^2 e^{2 beta |w|} dw with gtilde = (1/4 pi) r S."""
    rcut = _r_cutoff(a, beta, log_tol=44.0)

    def f(r):
        g = r * smooth_cutoff(r, a, beta) / (4.0 * math.pi)
        return r * g * g * np.exp(2.0 * beta * r)

    rule = finite_rule(0.0, rcut, panels=128, abs_tol=1e-12, rel_tol=1e-9)
    return c * c * float(integrate(f, rule).value) / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# Bayesian Cramer-Rao (Van Trees) report


def _default_prior(c):
    return np.cos(0.5 * math.pi * np.asarray(c, dtype=float)) ** 2


DEFAULT_PRIOR_FISHER = math.pi**2


@dataclass(frozen=True)
class VanTreesConfig:
    """Prior and asymptotics for the Bayesian Cramer-Rao bound.

    The prior density lives on [-1, 1], vanishes at the endpoints, and is
    rescaled to [-C_a, C_a]; its Fisher information I0 enters the bound as
    I0 / C_a^2.  The perturbation scale is tied to the sample size by
    a = n^eta.
    """

    eta: float
    n: int
    prior: callable = None
    prior_fisher: float = DEFAULT_PRIOR_FISHER

    def __post_init__(self):
        if not (0.0 < self.eta < 1.0):
            raise DomainError("eta must lie in (0, 1)")
        if self.n < 2:
            raise DomainError("n must be >= 2")
        lam = self.prior or _default_prior
        mass, _ = quad_adaptive(lam, -1.0, 1.0, abs_tol=1e-12, rel_tol=1e-11)
        if abs(mass - 1.0) > 1e-10:
            raise DomainError(f"prior must integrate to 1 (got {mass!r})")
        step = 1e-6

        def fisher_integrand(c):
            lo, hi = lam(c - step), lam(c + step)
            d = (hi - lo) / (2.0 * step)
            v = lam(c)
            return d * d / v if v > 0 else 0.0

        # the integrand extends continuously to the endpoints where the
        # prior vanishes; integrate the interior and add the edge strips
        eps = 1e-7
        i0, _ = quad_adaptive(
            fisher_integrand, -1.0 + eps, 1.0 - eps, abs_tol=1e-10, rel_tol=1e-9
        )
        i0 += eps * (fisher_integrand(-1.0 + eps) + fisher_integrand(1.0 - eps))
        if abs(i0 - self.prior_fisher) > 1e-8 * max(1.0, self.prior_fisher):
            raise DomainError(
                f"numeric prior Fisher information {i0!r} disagrees with "
                f"declared value {self.prior_fisher!r}"
            )

    def density(self):
        return self.prior or _default_prior


def van_trees_report(alpha, beta, q_small, cfg):
    """Numeric Bayesian Cramer-Rao lower bound for estimating W_c at z.

    bound = (Int dW_c(z)/dc lam dc)^2 / (n Int I(c) lam dc + I0 / C_a^2)

    with dW_c(z)/dc = g_a(0) independent of c.  Reports the bound, the
    squared target rate r_n^2 = c_star R0 (log n)^3 / n and their ratio,
    together with the ingredients.
    """
    a = float(cfg.n) ** cfg.eta
    c_a = q_small / (math.sqrt(a) * math.log(a) ** 1.5)
    ev = _evaluator(alpha, beta, a)
    lam = cfg.density()
    c_nodes, c_w = gauss_legendre_panels(np.array([-c_a, 0.0, c_a]), 12)
    lam_vals = lam(c_nodes / c_a) / c_a
    avg_info = float(np.sum(c_w * lam_vals * np.array([ev.info(c) for c in c_nodes])))
    g0 = g_a_point(a, beta, (0.0, 0.0))
    numerator = g0 * g0
    data_term = cfg.n * avg_info
    prior_term = cfg.prior_fisher / (c_a * c_a)
    bound = numerator / (data_term + prior_term)
    r0_val = r0(alpha)
    rn2 = r_n_squared(cfg.n, beta, r0_val)
    return {
        "alpha": alpha,
        "beta": beta,
        "q_small": q_small,
        "eta": cfg.eta,
        "n": cfg.n,
        "a": a,
        "C_a": c_a,
        "g_a_0": g0,
        "numerator": numerator,
        "avg_fisher": avg_info,
        "data_term": data_term,
        "prior_term": prior_term,
        "bound": bound,
        "R0": r0_val,
        "r_n_sq": rn2,
        "ratio": bound / rn2,
        "numerator_model": (c_star(beta) * cfg.eta**3 * math.log(cfg.n) ** 3) ** 2,
    }


def hardest_report(alpha, beta, n, eta, q_small, dim=512, c=None):
    """Full diagnostic report for one hardest-family configuration."""
    a = float(n) ** eta
    c_a = q_small / (math.sqrt(a) * math.log(a) ** 1.5)
    c_val = c_a if c is None else c
    scan = positivity_scan(alpha, beta, a, c_val, dim)
    scan_neg = positivity_scan(alpha, beta, a, -abs(c_val), dim)
    ev = _evaluator(alpha, beta, a)
    info0 = ev.info(0.0)
    r0_val = r0(alpha)
    asymptote = c_star(beta) * math.log(a) ** 3 / r0_val
    cfg = VanTreesConfig(eta=eta, n=n)
    vt = van_trees_report(alpha, beta, q_small, cfg)
    return {
        "alpha": alpha,
        "beta": beta,
        "a": a,
        "n": n,
        "eta": eta,
        "q_small": q_small,
        "C_a": c_a,
        "c": c_val,
        "positivity": {
            "ok": bool(scan["ok"] and scan_neg["ok"]),
            "first_violation_k": scan["first_violation_k"]
            if not scan["ok"]
            else scan_neg["first_violation_k"],
            "min_value": min(scan["min_value"], scan_neg["min_value"]),
        },
        "g_a_0": vt["g_a_0"],
        "int_Ha2": int_h_squared(a, beta),
        "fisher": {
            "I0_numeric": info0,
            "asymptote": asymptote,
            "ratio": info0 / asymptote,
        },
        "van_trees": {
            "bound": vt["bound"],
            "r_n_sq": vt["r_n_sq"],
            "ratio": vt["ratio"],
        },
    }
