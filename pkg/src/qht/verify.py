"""Fast invariant suites behind the `verify` subcommand.

Each check is a small self-contained assertion on library behavior; a suite
is a named list of checks.  Checks raise AssertionError (or any exception)
on failure and the runner turns that into a nonzero exit.
"""

import math

import numpy as np

from . import estimator, homodyne, minimax, specfun, states, wigner

SQRT_PI = math.sqrt(math.pi)


def _check_hermite_orthonormal():
    nodes, w = specfun.gauss_legendre_panels(np.linspace(-15, 15, 61), 16)
    psi = specfun.hermite_functions(nodes, 25)
    gram = (psi * w) @ psi.T
    assert np.max(np.abs(gram - np.eye(26))) < 1e-8


def _check_hermite_supnorm():
    x = np.linspace(-25, 25, 6001)
    psi = specfun.hermite_functions(x, 200)
    assert float(np.max(np.abs(psi))) <= 1.10


def _check_laguerre_ode():
    x = np.linspace(0.0, 10.0, 41)
    L, dL, ddL = specfun.laguerre_with_derivatives(x, 25)
    for n in range(1, 26):
        resid = n * L[n] - ((x - 1.0) * dL[n] - x * ddL[n])
        assert float(np.max(np.abs(resid))) < 1e-7


def _check_bessel_root():
    assert abs(specfun.bessel_j0(2.404825557695773)) < 1e-10


def _check_quadrature_basics():
    rule = specfun.finite_rule(0.0, 1.0)
    assert abs(specfun.integrate(lambda z: np.ones_like(z), rule).value - 1.0) < 1e-12
    rule = specfun.semi_infinite_rule(0.0, lambda r: math.exp(-r * r))
    val = specfun.integrate(lambda r: r * np.exp(-r * r), rule).value
    assert abs(val - 0.5) < 1e-12


def _check_state_examples():
    rho = states.build(states.StateSpec.from_json('{"type":"number","k":1}'))
    assert rho.matrix[1, 1] == 1.0 and rho.trace() == 1.0
    assert abs(states.alpha_diagonal(1.0, 1) - 1.0 / 6.0) < 1e-15
    assert abs(states.alpha_tail_mass(1.0, 2) - 1.0 / 3.0) < 1e-15


def _check_state_roundtrip():
    spec = states.StateSpec.from_json('{"type":"alpha","alpha":0.25,"dim":256}')
    assert states.StateSpec.from_json(spec.to_json()) == spec


def _check_charfn_vacuum():
    rho = states.build(states.StateSpec(kind="diagonal", weights=(1.0,)))
    for t in (0.0, 0.7, 2.3):
        val = wigner.charfn(rho, t, 0.3)
        assert abs(val - math.exp(-t * t / 4.0)) < 1e-9


def _check_wigner_single_photon():
    rho = states.build(states.StateSpec(kind="number", k=1))
    val = wigner.wigner_point(rho, 1.0, 0.0)
    assert abs(val - math.exp(-1.0) / math.pi) < 1e-8
    assert abs(wigner.wigner_point(rho, 0.0, 0.0) + 1.0 / math.pi) < 1e-8


def _check_l2_isometry():
    vac = states.build(states.StateSpec(kind="diagonal", weights=(1.0,)))
    one = states.build(states.StateSpec(kind="number", k=1))
    d = wigner.l2_distance(vac, one)
    assert abs(d - 1.0 / math.pi) < 0.02 / math.pi


def _check_pdf_normalization():
    rho = states.build(
        states.StateSpec(kind="diagonal", weights=(0.5, 0.2, 0.2, 0.1))
    )
    nodes, w = specfun.gauss_legendre_panels(np.linspace(-12, 12, 49), 16)
    for phi in np.linspace(0.0, math.pi, 5):
        mass = float(np.sum(w * homodyne.pdf(rho, nodes, phi)))
        assert abs(mass - 1.0) < 1e-8


def _check_dual_radon_values():
    vac = states.build(states.StateSpec(kind="diagonal", weights=(1.0,)))
    one = states.build(states.StateSpec(kind="number", k=1))
    assert abs(homodyne.dual_radon(vac, (0.0, 0.0)) - 2.0 * SQRT_PI) < 1e-9
    assert homodyne.dual_radon(one, (0.0, 0.0)) < 1e-12


def _check_sampler_determinism():
    spec = states.StateSpec(kind="number", k=1)
    a = homodyne.sample_state(spec, 500, 42)
    b = homodyne.sample_state(spec, 500, 42)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.phi, b.phi)


def _check_sampler_moments():
    spec = states.StateSpec(kind="diagonal", weights=(1.0,))
    data = homodyne.sample_state(spec, 20000, 7)
    assert abs(float(np.mean(data.x))) < 4.0 / math.sqrt(2.0 * 20000)
    assert abs(float(np.var(data.x)) - 0.5) < 0.05 * 0.5


def _check_kernel_closed_form():
    bw = estimator.Bandwidth(delta=1.0)
    assert abs(estimator.kernel(bw, math.pi) + 1.0 / math.pi**3) < 1e-14
    assert abs(estimator.kernel(bw, 0.0) - 1.0 / (4.0 * math.pi)) < 1e-16
    for u in (0.3, 1.7, 5.0):
        val, _ = specfun.quad_adaptive(
            lambda r, uu=u: r * math.cos(r * uu) / (2.0 * math.pi), 0.0, 1.0
        )
        assert abs(estimator.kernel(bw, u) - val) < 1e-12


def _check_bandwidth_rule():
    bw = estimator.bandwidth_rule(10**4, estimator.SmoothnessClass(beta=0.5))
    assert abs(bw.cutoff - math.log(1e4)) < 1e-12


def _check_single_sample_estimate():
    data = homodyne.SampleSet(x=np.array([0.0]), phi=np.array([0.0]), seed=0)
    bw = estimator.Bandwidth(delta=1.0)
    val = estimator.estimate_point(data, bw, (0.0, 0.0))
    assert abs(val - 1.0 / (4.0 * math.pi)) < 1e-15


def _check_mehler():
    for z in (0.3, 0.6, 0.9):
        for x in (0.0, 1.0, 2.0):
            lhs = float(minimax.mehler_sum(z, x, 300))
            rhs = float(minimax.mehler_rhs(z, x))
            assert abs(lhs - rhs) < 1e-8


def _check_r0_consistency():
    val = minimax.r0(0.25)
    assert abs(val - 2.0 * math.pi * minimax.p_alpha(0.25, 0.0)) < 1e-9


def _check_tau_basics():
    assert minimax.tau_diag(1e4, 1.0, 0) > 0


def _check_hardest_center():
    diag = minimax.hardest_diag_all(0.2, 1.0, 1e4, 0.0, 64)
    ref = states.alpha_diagonal_all(0.2, 63)
    assert np.max(np.abs(diag - ref)) == 0.0


SUITES = {
    "specfun": [
        ("hermite orthonormality (k <= 25)", _check_hermite_orthonormal),
        ("hermite sup-norm ceiling (k <= 200)", _check_hermite_supnorm),
        ("laguerre differential equation", _check_laguerre_ode),
        ("bessel J0 first root", _check_bessel_root),
        ("quadrature basics", _check_quadrature_basics),
    ],
    "state": [
        ("constructor examples", _check_state_examples),
        ("spec JSON round-trip", _check_state_roundtrip),
    ],
    "wigner": [
        ("vacuum characteristic function", _check_charfn_vacuum),
        ("single-photon values", _check_wigner_single_photon),
        ("matrix/grid distance identity", _check_l2_isometry),
    ],
    "homodyne": [
        ("density normalization", _check_pdf_normalization),
        ("line averages through origin", _check_dual_radon_values),
        ("sampler determinism", _check_sampler_determinism),
        ("sampler moments", _check_sampler_moments),
    ],
    "estimator": [
        ("filter closed form", _check_kernel_closed_form),
        ("bandwidth rule", _check_bandwidth_rule),
        ("single-sample average", _check_single_sample_estimate),
    ],
    "minimax": [
        ("generating identity spot checks", _check_mehler),
        ("line average vs density at origin", _check_r0_consistency),
        ("bump diagonal increments", _check_tau_basics),
        ("unperturbed family center", _check_hardest_center),
    ],
}


def run_suite(names, out=print):
    """Run the requested suites; returns the number of failures."""
    if "all" in names:
        names = list(SUITES)
    failures = 0
    for name in names:
        if name not in SUITES:
            out(f"[FAIL] unknown suite: {name}")
            failures += 1
            continue
        for label, fn in SUITES[name]:
            try:
                fn()
            except Exception as exc:  # report and continue
                out(f"[FAIL] {name}: {label}: {exc!r}")
                failures += 1
            else:
                out(f"[ok]   {name}: {label}")
    return failures
