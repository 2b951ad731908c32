"""Truncated Fock-basis density matrices and their serializable specs.

A state is a positive, trace-one, self-adjoint K x K matrix in the number
basis.  Besides explicit matrices the module knows a few parametric families:
number states |k><k|, finite diagonal mixtures, pure states, and the heavy
tailed one-parameter diagonal family rho(alpha) with entries

    rho_kk = alpha * Integral_0^1 z^k (1-z)^alpha dz = alpha * B(k+1, alpha+1)

whose photon-number distribution decays like k^-(1+alpha).
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate

from .errors import DomainError, InvalidSpec

__all__ = [
    "DensityMatrix",
    "StateSpec",
    "build",
    "alpha_diagonal",
    "alpha_diagonal_all",
    "alpha_tail_mass",
    "diag_tail_mass",
    "alpha_fock_pdf",
    "alpha_fock_charfn",
]

_PSD_EIG_TOL = -1e-10
_TRACE_UPPER_SLACK = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Validated Fock-basis density matrix.

    ``matrix`` is stored exactly Hermitian (symmetrized at construction) and
    read-only.  ``tail_mass_bound`` budgets the probability mass excluded by
    the truncation: the trace must lie in [1 - tail_mass_bound, 1 + 1e-12].
    """

    matrix: np.ndarray
    tail_mass_bound: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InvalidSpec("density matrix must be square and non-empty")
        m = 0.5 * (m + m.conj().T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if not np.isfinite(self.tail_mass_bound) or self.tail_mass_bound < 0:
            raise InvalidSpec("tail_mass_bound must be finite and >= 0")
        tr = float(np.trace(m).real)
        if not (1.0 - self.tail_mass_bound - 1e-12 <= tr <= 1.0 + _TRACE_UPPER_SLACK):
            raise InvalidSpec(
                f"trace {tr!r} outside [1 - tail_mass_bound, 1 + 1e-12] "
                f"(tail_mass_bound={self.tail_mass_bound!r})"
            )
        if self.is_diagonal:
            eig_min = float(np.min(np.diag(m).real))
        else:
            eig_min = float(np.linalg.eigvalsh(m)[0])
        if eig_min < _PSD_EIG_TOL:
            raise InvalidSpec(f"matrix is not PSD (min eigenvalue {eig_min:.3e})")

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def is_diagonal(self):
        if self.dim == 1:
            return True
        off = self.matrix - np.diag(np.diag(self.matrix))
        return bool(np.max(np.abs(off)) < 1e-15)

    @property
    def diagonal(self):
        return np.diag(self.matrix).real.copy()

    def trace(self):
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True)
class StateSpec:
    """Serializable description of a state.

    ``kind`` is one of number | diagonal | pure | alpha | hardest | matrix.
    Only the fields relevant to the kind are set.
    """

    kind: str
    k: int = None
    weights: tuple = None
    coeffs: tuple = None
    alpha: float = None
    a: float = None
    c: float = None
    beta: float = 1.0
    dim: int = None
    matrix_re: tuple = None
    matrix_im: tuple = None

    def validate(self):
        if self.kind == "number":
            if self.k is None or self.k < 0:
                raise InvalidSpec("number state needs k >= 0")
        elif self.kind == "diagonal":
            w = np.asarray(self.weights, dtype=float)
            if w.ndim != 1 or w.size == 0:
                raise InvalidSpec("diagonal state needs a weight vector")
            if np.any(w < 0):
                raise InvalidSpec("diagonal weights must be nonnegative")
            if w.sum() > 1.0 + 1e-12:
                raise InvalidSpec("diagonal weights must sum to <= 1")
        elif self.kind == "pure":
            v = np.asarray(self.coeffs, dtype=complex)
            if v.ndim != 1 or v.size == 0:
                raise InvalidSpec("pure state needs a coefficient vector")
            nrm = float(np.linalg.norm(v))
            if abs(nrm - 1.0) > 1e-12:
                raise InvalidSpec(f"pure coefficients must have unit norm, got {nrm!r}")
        elif self.kind == "alpha":
            if self.alpha is None or not (0.0 < self.alpha <= 1.0):
                raise InvalidSpec("alpha state needs alpha in (0, 1]")
            if self.dim is None or self.dim < 1:
                raise InvalidSpec("alpha state needs dim >= 1")
        elif self.kind == "hardest":
            if self.alpha is None or not (0.0 < self.alpha < 0.25):
                raise InvalidSpec("hardest family needs alpha in (0, 1/4)")
            if self.a is None or self.a <= 1.0:
                raise InvalidSpec("hardest family needs a > 1")
            if self.c is None:
                raise InvalidSpec("hardest family needs c")
            if self.dim is None or self.dim < 1:
                raise InvalidSpec("hardest family needs dim >= 1")
        elif self.kind == "matrix":
            if self.matrix_re is None:
                raise InvalidSpec("matrix state needs entries")
        else:
            raise InvalidSpec(f"unknown state kind {self.kind!r}")
        return self

    def to_json(self):
        if self.kind == "number":
            obj = {"type": "number", "k": self.k}
        elif self.kind == "diagonal":
            obj = {"type": "diagonal", "weights": list(self.weights)}
        elif self.kind == "pure":
            obj = {"type": "pure", "coeffs": [[z.real, z.imag] for z in self.coeffs]}
        elif self.kind == "alpha":
            obj = {"type": "alpha", "alpha": self.alpha, "dim": self.dim}
        elif self.kind == "hardest":
            obj = {
                "type": "hardest",
                "alpha": self.alpha,
                "a": self.a,
                "c": self.c,
                "dim": self.dim,
            }
            if self.beta != 1.0:
                obj["beta"] = self.beta
        elif self.kind == "matrix":
            obj = {
                "type": "matrix",
                "re": [list(row) for row in self.matrix_re],
                "im": [list(row) for row in self.matrix_im],
            }
        else:
            raise InvalidSpec(f"unknown state kind {self.kind!r}")
        return json.dumps(obj, sort_keys=True)

    @staticmethod
    def from_json(text):
        obj = json.loads(text) if isinstance(text, str) else dict(text)
        kind = obj.get("type")
        if kind == "number":
            return StateSpec(kind="number", k=int(obj["k"])).validate()
        if kind == "diagonal":
            return StateSpec(
                kind="diagonal", weights=tuple(float(w) for w in obj["weights"])
            ).validate()
        if kind == "pure":
            return StateSpec(
                kind="pure",
                coeffs=tuple(complex(re, im) for re, im in obj["coeffs"]),
            ).validate()
        if kind == "alpha":
            return StateSpec(
                kind="alpha", alpha=float(obj["alpha"]), dim=int(obj["dim"])
            ).validate()
        if kind == "hardest":
            return StateSpec(
                kind="hardest",
                alpha=float(obj["alpha"]),
                a=float(obj["a"]),
                c=float(obj["c"]),
                beta=float(obj.get("beta", 1.0)),
                dim=int(obj["dim"]),
            ).validate()
        if kind == "matrix":
            re = obj["re"]
            im = obj.get("im") or [[0.0] * len(row) for row in re]
            return StateSpec(
                kind="matrix",
                matrix_re=tuple(tuple(float(v) for v in row) for row in re),
                matrix_im=tuple(tuple(float(v) for v in row) for row in im),
            ).validate()
        raise InvalidSpec(f"unknown state type {kind!r}")


def build(spec):
    """Construct the DensityMatrix described by a StateSpec."""
    spec.validate()
    if spec.kind == "number":
        dim = spec.k + 1 if spec.dim is None else max(spec.dim, spec.k + 1)
        m = np.zeros((dim, dim), dtype=complex)
        m[spec.k, spec.k] = 1.0
        return DensityMatrix(m)
    if spec.kind == "diagonal":
        w = np.asarray(spec.weights, dtype=float)
        return DensityMatrix(
            np.diag(w).astype(complex), tail_mass_bound=max(0.0, 1.0 - w.sum())
        )
    if spec.kind == "pure":
        v = np.asarray(spec.coeffs, dtype=complex)
        return DensityMatrix(np.outer(v, v.conj()))
    if spec.kind == "alpha":
        w = alpha_diagonal_all(spec.alpha, spec.dim - 1)
        return DensityMatrix(
            np.diag(w).astype(complex),
            tail_mass_bound=alpha_tail_mass(spec.alpha, spec.dim),
        )
    if spec.kind == "hardest":
        from .minimax import hardest_diag_all, tau_tail_bound

        diag = hardest_diag_all(spec.alpha, spec.beta, spec.a, spec.c, spec.dim)
        tail = alpha_tail_mass(spec.alpha, spec.dim) + abs(spec.c) * tau_tail_bound(
            spec.a, spec.beta, spec.dim
        )
        return DensityMatrix(np.diag(diag).astype(complex), tail_mass_bound=tail)
    if spec.kind == "matrix":
        m = np.asarray(spec.matrix_re, dtype=float) + 1j * np.asarray(
            spec.matrix_im, dtype=float
        )
        return DensityMatrix(m)
    raise InvalidSpec(f"unknown state kind {spec.kind!r}")


def _check_alpha(alpha):
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")


def alpha_diagonal(alpha, k):
    """Photon-number probability rho_kk = alpha * B(k+1, alpha+1)."""
    _check_alpha(alpha)
    if k < 0:
        raise DomainError("k must be >= 0")
    return alpha * math.exp(
        math.lgamma(k + 1) + math.lgamma(alpha + 1) - math.lgamma(k + alpha + 2)
    )


def alpha_diagonal_all(alpha, k_max):
    """Vector of alpha_diagonal(alpha, k) for k = 0..k_max (ratio recurrence)."""
    _check_alpha(alpha)
    out = np.empty(k_max + 1)
    out[0] = alpha / (alpha + 1.0)
    for k in range(k_max):
        out[k + 1] = out[k] * (k + 1.0) / (k + alpha + 2.0)
    return out


def alpha_tail_mass(alpha, dim):
    """Mass beyond the truncation: 1 - sum_{k<dim} rho_kk = alpha*B(dim+1, alpha)."""
    _check_alpha(alpha)
    if dim < 1:
        raise DomainError("dim must be >= 1")
    return alpha * math.exp(
        math.lgamma(dim + 1) + math.lgamma(alpha) - math.lgamma(dim + alpha + 1)
    )


def diag_tail_mass(weights, dim):
    """1 - sum of the first `dim` diagonal weights."""
    if dim < 1:
        raise DomainError("dim must be >= 1")
    w = np.asarray(weights, dtype=float)
    return max(0.0, 1.0 - float(w[:dim].sum()))


def _alpha_pdf_tail(alpha, x, k_from):
    """Estimated remainder sum_{k>=k_from} rho_kk psi_k(x)^2.

    Uses the slowly varying local mean psi_k(x)^2 ~ 1/(pi sqrt(2k+1-x^2))
    (valid for k >> x^2) and the asymptotic weight profile; the oscillatory
    part of psi_k^2 cancels to a higher order in the sum.  The k-integral is
    mapped onto (0, 1] by k = K/s so the power-law tail is exact:

        Int_K^inf k^-(1+a) (2k+1-x^2)^(-1/2) dk
            = K^-a Int_0^1 s^(a-1/2) (2K + s(1-x^2))^(-1/2) ds.
    """
    big_k = k_from - 0.5
    coeff = alpha * math.exp(math.lgamma(alpha + 1.0)) / math.pi

    def f(s):
        return s ** (alpha - 0.5) * (2.0 * big_k + s * (1.0 - x * x)) ** -0.5

    val, _ = _integrate.quad(f, 0.0, 1.0, limit=200)
    return coeff * big_k**-alpha * val


def alpha_fock_pdf(alpha, x, n_terms=1 << 17, tail=True):
    """Quadrature-free density of the alpha state: sum_k rho_kk psi_k(x)^2.

    Streams the normalized Hermite recurrence up to ``n_terms`` and, when
    ``tail`` is set, adds the estimated remainder of the slowly converging
    k^-(1+alpha) series.  Accepts a scalar or a vector of points.
    """
    _check_alpha(alpha)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    uniq, inv = np.unique(x_arr, return_inverse=True)
    psi_prev = math.pi ** -0.25 * np.exp(-0.5 * uniq * uniq)
    psi_cur = math.sqrt(2.0) * uniq * psi_prev
    w = alpha / (alpha + 1.0)
    acc = w * psi_prev * psi_prev
    w = w * 1.0 / (alpha + 2.0)
    acc += w * psi_cur * psi_cur
    for k in range(1, n_terms - 1):
        psi_prev, psi_cur = psi_cur, (
            math.sqrt(2.0 / (k + 1)) * uniq * psi_cur
            - math.sqrt(k / (k + 1.0)) * psi_prev
        )
        w = w * (k + 1.0) / (k + alpha + 2.0)
        acc += w * psi_cur * psi_cur
    if tail:
        acc = acc + np.array([_alpha_pdf_tail(alpha, xv, n_terms) for xv in uniq])
    out = acc[inv]
    return out[0] if np.isscalar(x) or np.ndim(x) == 0 else out.reshape(np.shape(x))

def alpha_fock_charfn(alpha, t, n_terms=1 << 20):
    """Radial characteristic function of the alpha state by Fock summation.

    Evaluates sum_k rho_kk L_k(t^2/2) exp(-t^2/4) with the weighted Laguerre
    recurrence; the terms alternate at scale k^-(5/4+alpha) so the plain
    partial sum converges (no tail model needed at the default depth).
    """
    _check_alpha(alpha)
    s = 0.5 * float(t) * float(t)
    l_prev = math.exp(-0.5 * s)
    l_cur = (1.0 - s) * l_prev
    w = alpha / (alpha + 1.0)
    acc = w * l_prev
    w = w / (alpha + 2.0)
    acc += w * l_cur
    for k in range(1, n_terms - 1):
        l_prev, l_cur = l_cur, ((2 * k + 1 - s) * l_cur - k * l_prev) / (k + 1.0)
        w = w * (k + 1.0) / (k + alpha + 2.0)
        acc += w * l_cur
    return acc
