"""Wigner function evaluation and its Fourier-side companions.

The characteristic function of a state is obtained by Fourier transforming
the sampling density at fixed phase,

    Wtilde(t cos phi, t sin phi) = Integral p(x, phi) exp(-i x t) dx,

and the Wigner function by inverting the 2-D transform in polar form,

    W(q, p) = (1/4 pi^2) Integral_0^{2 pi} dphi Integral_0^inf dt
              t Wtilde(t, phi) exp(i t (q cos phi + p sin phi)),

which is what the quadrature evaluator below implements.  Rotation-invariant
(diagonal) states additionally have the classical closed form in terms of
Laguerre polynomials, used as a fast path and as a cross-check oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentIntegrand, DomainError, NonConvergence
from .specfun import (
    finite_rule,
    gauss_legendre_panels,
    hermite_functions,
    integrate,
    laguerre_weighted_all,
)
from .states import DensityMatrix

__all__ = [
    "GridSpec",
    "WignerField",
    "charfn",
    "wigner_point",
    "wigner_grid",
    "wigner_diagonal_closed_form",
    "diag_from_charfn",
    "l2_distance",
    "write_wigner_csv",
]


@dataclass(frozen=True)
class GridSpec:
    """Rectangular evaluation grid, `steps` points per axis."""

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    steps: int

    def __post_init__(self):
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise DomainError("grid bounds must satisfy min < max")
        if self.steps < 2:
            raise DomainError("grid needs at least 2 steps per axis")

    def q_axis(self):
        return np.linspace(self.q_min, self.q_max, self.steps)

    def p_axis(self):
        return np.linspace(self.p_min, self.p_max, self.steps)

    def points(self):
        """All grid points, p varying in the outer loop, q in the inner."""
        q, p = np.meshgrid(self.q_axis(), self.p_axis())
        return np.column_stack([q.ravel(), p.ravel()])

    def radius(self):
        return max(
            math.hypot(qv, pv)
            for qv in (self.q_min, self.q_max)
            for pv in (self.p_min, self.p_max)
        )

    @staticmethod
    def centered(radius, steps):
        return GridSpec(-radius, radius, -radius, radius, steps)


def _x_quadrature(dim, t_max, scale):
    half = math.sqrt(2.0 * dim + 1.0) + 9.0
    width = min(0.6, 7.5 / max(t_max, 1.0)) / scale
    panels = int(math.ceil(2.0 * half / width))
    return gauss_legendre_panels(np.linspace(-half, half, panels + 1), 16)


def _t_quadrature(dim, r_max, scale):
    t_max = 2.0 * math.sqrt(2.0 * dim + 1.0) + 10.0
    width = min(0.8, 7.5 / max(r_max, 1.0), 9.0 / math.sqrt(2.0 * dim + 1.0))
    panels = int(math.ceil(t_max / (width / scale)))
    return gauss_legendre_panels(np.linspace(0.0, t_max, panels + 1), 16)


def _n_phi(dim, t_max, r_max, scale):
    m = 2.0 * (t_max * r_max + dim) + 32.0
    return max(64, 2 * int(math.ceil(scale * m / 2.0)))


def _charfn_half_grid(rho, t_nodes, n_phi_half, scale):
    """Wtilde(t, phi) on t_nodes x {phi_m = pi m / n_phi_half}, m < n_phi_half."""
    K = rho.dim
    x_nodes, x_w = _x_quadrature(K, float(t_nodes[-1]), scale)
    psi = hermite_functions(x_nodes, K - 1)
    fourier = np.exp(-1j * np.outer(x_nodes, t_nodes)) * x_w[:, None]
    if rho.is_diagonal:
        dens = rho.diagonal @ (psi * psi)
        row = dens @ fourier
        return np.broadcast_to(row, (n_phi_half, t_nodes.size)).copy()
    c_plus = np.empty((K - 1, t_nodes.size), dtype=complex)
    c_minus = np.empty_like(c_plus)
    band0 = np.einsum("k,kn,kn->n", np.diag(rho.matrix), psi, psi)
    out = np.tile(band0 @ fourier, (n_phi_half, 1))
    for d in range(1, K):
        m = np.diagonal(rho.matrix, offset=-d)  # rho[k+d, k]
        u = np.einsum("k,kn,kn->n", m, psi[d:], psi[: K - d])
        c_plus[d - 1] = u @ fourier
        c_minus[d - 1] = u.conj() @ fourier
    phi = np.arange(n_phi_half) * (math.pi / n_phi_half)
    d = np.arange(1, K)
    out += np.exp(-1j * np.outer(phi, d)) @ c_plus
    out += np.exp(1j * np.outer(phi, d)) @ c_minus
    return out


def _wigner_eval(rho, points, scale):
    """One quadrature pass over all points at a given resolution scale."""
    points = np.asarray(points, dtype=float)
    r_max = float(np.max(np.hypot(points[:, 0], points[:, 1]))) if points.size else 0.0
    t_nodes, t_w = _t_quadrature(rho.dim, r_max, scale)
    t_max = float(t_nodes[-1])
    n_phi = _n_phi(rho.dim, t_max, r_max, scale)
    half = n_phi // 2
    wt_half = _charfn_half_grid(rho, t_nodes, half, scale)
    weighted_half = wt_half * (t_w * t_nodes)[None, :]
    phi = np.arange(half) * (2.0 * math.pi / n_phi)
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    acc = np.zeros(points.shape[0])
    for m in range(half):
        # conjugate symmetry pairs phi with phi + pi: their contributions
        # are complex conjugates, so only the real part survives
        s = points[:, 0] * cos_phi[m] + points[:, 1] * sin_phi[m]
        acc += 2.0 * (np.exp(1j * np.outer(s, t_nodes)) @ weighted_half[m]).real
    acc *= (2.0 * math.pi / n_phi) / (4.0 * math.pi**2)
    return acc.astype(complex)


def wigner_grid(rho, points, abs_tol=1e-8, max_passes=3):
    """Wigner function at arbitrary points by refined polar quadrature.

    Doubles the effective resolution until two passes agree within abs_tol;
    raises NonConvergence otherwise.  Returns real values and checks the
    imaginary residue of the quadrature stays below 1e-9.
    """
    scale = 1.0
    prev = _wigner_eval(rho, points, scale)
    for _ in range(max_passes):
        scale *= 1.6
        cur = _wigner_eval(rho, points, scale)
        delta = float(np.max(np.abs(cur - prev)))
        if delta <= abs_tol:
            resid = float(np.max(np.abs(cur.imag)))
            if resid > 1e-9:
                raise NonConvergence(f"imaginary residue {resid:.2e} exceeds 1e-9")
            return cur.real
        prev = cur
    raise NonConvergence(
        f"Wigner quadrature did not stabilize to {abs_tol:g} "
        f"after {max_passes} refinements"
    )


def wigner_point(rho, q, p, abs_tol=1e-10):
    """W(q, p) for a single point (see module docstring for the integral)."""
    return float(wigner_grid(rho, np.array([[q, p]]), abs_tol=abs_tol)[0])


def charfn(rho, t, phi, abs_tol=1e-12, rel_tol=1e-10):
    """Characteristic function Wtilde(t cos phi, t sin phi) by x-quadrature.

    Fourier convention: F[f](t) = Integral f(x) exp(-i x t) dx.  `t` may be a
    scalar or a vector (shared phase); convergence is checked by panel
    doubling on the Hermite-sum density.
    """
    from .homodyne import pdf

    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    t_big = float(np.max(np.abs(t_arr)))
    K = rho.dim

    def pass_at(scale):
        x_nodes, x_w = _x_quadrature(K, t_big, scale)
        dens = pdf(rho, x_nodes, phi)
        return (dens * x_w) @ np.exp(-1j * np.outer(x_nodes, t_arr))

    prev = pass_at(1.0)
    for scale in (2.0, 4.0, 8.0):
        cur = pass_at(scale)
        err = float(np.max(np.abs(cur - prev)))
        if err <= max(abs_tol, rel_tol * float(np.max(np.abs(cur)))):
            return cur[0] if np.ndim(t) == 0 else cur
        prev = cur
    raise NonConvergence("characteristic-function quadrature did not stabilize")


def wigner_diagonal_closed_form(weights, q, p):
    """Closed-form Wigner function of a photon-number mixture.

    For the projector on level k, W_k(q, p) = ((-1)^k / pi) L_k(2 r^2)
    exp(-r^2) with r^2 = q^2 + p^2; the mixture is the weighted sum.
    Vectorized over (q, p) arrays.
    """
    w = np.asarray(weights, dtype=float)
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    r2 = q * q + p * p
    lag = laguerre_weighted_all(2.0 * r2, w.size - 1)
    signs = np.where(np.arange(w.size) % 2 == 0, 1.0, -1.0) * w / math.pi
    return np.tensordot(signs, lag, axes=(0, 0))


def diag_from_charfn(char_radial, k, abs_tol=1e-10, t_start=None, t_limit=80.0):
    """Photon-number probability from a rotation-invariant characteristic fn.

    Evaluates Integral_0^inf t exp(-t^2/4) L_k(t^2/2) Wtilde(t) dt, the
    radial reduction of the 2-D inversion formula (angular integral = 2 pi
    against the 1/2 pi prefactor).  Demands Gaussian-dominated decay of
    Wtilde: the domain is extended until the weighted integrand is
    negligible, else DivergentIntegrand is raised.

    ``char_radial`` must accept an ndarray of radii.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    t_max = t_start if t_start is not None else 2.0 * math.sqrt(2.0 * k + 1.0) + 10.0
    while True:
        edge = abs(float(np.atleast_1d(char_radial(np.array([t_max])))[0])) * t_max
        if edge < abs_tol * 1e-2:
            break
        t_max *= 1.4
        if t_max > t_limit:
            raise DivergentIntegrand(
                "characteristic function does not decay fast enough for the "
                "Gaussian-weighted inversion integral"
            )

    def f(t):
        lk = laguerre_weighted_all(0.5 * t * t, k)[k]
        return t * lk * np.asarray(char_radial(t))

    width = min(0.5, math.pi / (2.0 * math.sqrt(2.0 * k + 1.0)))
    rule = finite_rule(
        0.0,
        t_max,
        panels=int(math.ceil(t_max / width)),
        order=16,
        abs_tol=abs_tol,
        rel_tol=1e-10,
    )
    return float(integrate(f, rule).value)


def _field_values(rho, grid):
    pts = grid.points()
    if rho.is_diagonal:
        vals = wigner_diagonal_closed_form(rho.diagonal, pts[:, 0], pts[:, 1])
    else:
        vals = wigner_grid(rho, pts, abs_tol=1e-7)
    return vals.reshape(grid.steps, grid.steps)


DEFAULT_L2_GRID = GridSpec(-6.0, 6.0, -6.0, 6.0, 241)


def l2_distance(rho, tau, grid=None):
    """Squared L2 distance of two Wigner functions by grid integration.

    The grid must cover the states' effective support (default radius 6,
    241 points per axis, trapezoid weights).  The matrix-side identity
    (1/2 pi) sum |rho_ij - tau_ij|^2 is the exact counterpart.
    """
    grid = grid or DEFAULT_L2_GRID
    diff = _field_values(rho, grid) - _field_values(tau, grid)
    inner = np.trapezoid(diff * diff, grid.q_axis(), axis=1)
    return float(np.trapezoid(inner, grid.p_axis()))


class WignerField:
    """Evaluator for the Wigner function of one state with grid caching."""

    def __init__(self, rho):
        if not isinstance(rho, DensityMatrix):
            raise DomainError("WignerField needs a DensityMatrix")
        self.rho = rho
        self._grids = {}

    @property
    def has_closed_form(self):
        return self.rho.is_diagonal

    def point(self, q, p, abs_tol=1e-10):
        if self.has_closed_form:
            return float(
                wigner_diagonal_closed_form(self.rho.diagonal, q, p)
            )
        return wigner_point(self.rho, q, p, abs_tol=abs_tol)

    def grid(self, spec):
        if spec not in self._grids:
            self._grids[spec] = _field_values(self.rho, spec)
        return self._grids[spec]

    def validate(self, bound_grid=None):
        """Spot-check normalization and the uniform bound |W| <= 1/pi."""
        total = charfn(self.rho, 0.0, 0.0)
        if abs(total.real - self.rho.trace()) > 1e-8:
            raise NonConvergence(
                f"normalization check failed: {total.real!r} vs trace"
            )
        spec = bound_grid or GridSpec.centered(6.0, 61)
        vals = self.grid(spec)
        ceiling = 1.0 / math.pi + 1e-6
        if float(np.max(np.abs(vals))) > ceiling:
            raise NonConvergence("uniform bound |W| <= 1/pi violated")
        return True


def write_wigner_csv(path, grid, values, value_name="w"):
    """Write grid values as `q,p,<name>` rows, p outer loop, 17 digits."""
    q_ax, p_ax = grid.q_axis(), grid.p_axis()
    values = np.asarray(values)
    if values.shape != (grid.steps, grid.steps):
        raise DomainError("values must have shape (steps, steps)")
    with open(str(path), "w") as fh:
        fh.write(f"q,p,{value_name}\n")
        for ip, pv in enumerate(p_ax):
            for iq, qv in enumerate(q_ax):
                fh.write(f"{qv:.17g},{pv:.17g},{values[ip, iq]:.17g}\n")
