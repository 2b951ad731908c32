import math

import numpy as np
import pytest
from scipy import stats as st
from scipy.integrate import cumulative_trapezoid
from scipy.special import erf

from qht import homodyne, states
from qht.errors import DomainError, TruncationTooSmall
from qht.homodyne import _pdf_values
from qht.specfun import gauss_legendre_panels, hermite_functions


def vacuum():
    return states.build(states.StateSpec(kind="diagonal", weights=(1.0,)))


def number(k):
    return states.build(states.StateSpec(kind="number", k=k))


def random_state(rng, dim, pure=False):
    if pure:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v /= np.linalg.norm(v)
        return states.build(states.StateSpec(kind="pure", coeffs=tuple(v)))
    w = rng.dirichlet(np.ones(dim))
    return states.build(states.StateSpec(kind="diagonal", weights=tuple(w)))


class TestPdf:
    def test_number_state_phase_independent(self):
        rho = number(3)
        x = np.linspace(-3, 3, 11)
        base = homodyne.pdf(rho, x, 0.0)
        psi3 = hermite_functions(x, 3)[3]
        assert np.max(np.abs(base - psi3 * psi3)) < 1e-14
        for phi in (0.4, 1.2, 2.9):
            assert np.max(np.abs(homodyne.pdf(rho, x, phi) - base)) < 1e-14

    def test_vacuum_at_origin(self):
        assert float(homodyne.pdf(vacuum(), 0.0, 0.7)) == pytest.approx(
            math.pi**-0.5, rel=1e-14
        )

    def test_normalization_across_phases(self):
        rng = np.random.default_rng(21)
        rho = random_state(rng, 12, pure=True)
        nodes, w = gauss_legendre_panels(np.linspace(-14, 14, 57), 16)
        for phi in np.linspace(0.0, math.pi, 8, endpoint=False):
            mass = float(np.sum(w * homodyne.pdf(rho, nodes, phi)))
            assert mass == pytest.approx(1.0, abs=1e-8)

    def test_nonnegativity_with_tiny_clamp(self):
        rng = np.random.default_rng(3)
        x = np.linspace(-10, 10, 4001)
        for _ in range(4):
            rho = random_state(rng, 16, pure=True)
            raw = _pdf_values(rho, x, rng.uniform(0, math.pi))
            assert float(raw.min()) > -1e-10
            frac = np.mean(raw < 0)
            assert frac < 1e-6 or float(raw.min()) > -1e-14
            assert np.all(homodyne.pdf(rho, x, 0.3) >= 0.0)

    def test_reflection_extension(self):
        rng = np.random.default_rng(8)
        rho = random_state(rng, 6, pure=True)
        x = np.linspace(-2, 2, 9)
        for phi in (0.3, 1.0, 2.2):
            ext = homodyne.pdf(rho, x, phi + math.pi)
            assert np.max(np.abs(ext - homodyne.pdf(rho, -x, phi))) < 1e-14


class TestDualRadon:
    def test_vacuum_origin(self):
        assert homodyne.dual_radon(vacuum(), (0.0, 0.0)) == pytest.approx(
            2.0 * math.sqrt(math.pi), rel=1e-10
        )

    def test_single_photon_origin_vanishes(self):
        assert homodyne.dual_radon(number(1), (0.0, 0.0)) < 1e-12

    def test_alpha_family_matches_radial_formula(self):
        from qht.minimax import r0

        val = homodyne.dual_radon(
            lambda x, phi: states.alpha_fock_pdf(0.25, x, n_terms=1 << 17),
            (0.0, 0.0),
        )
        assert val == pytest.approx(r0(0.25), abs=1e-5)

    def test_bounded_by_charfn_line_integral(self):
        # triangle inequality: R#R(z) <= (1/2pi) Int dphi Int dt |Wtilde(t,phi)|
        from qht.wigner import charfn

        t_nodes, t_w = gauss_legendre_panels(np.linspace(0.0, 14.0, 29), 16)
        for rho in (vacuum(), number(1)):
            line = sum(
                2.0 * float(np.sum(t_w * np.abs(charfn(rho, t_nodes, phi))))
                for phi in np.linspace(0.0, math.pi, 8, endpoint=False)
            ) * (math.pi / 8.0)
            bound = 2.0 * line / (2.0 * math.pi)
            for z in ((0.0, 0.0), (1.0, -0.5), (2.0, 1.0)):
                assert homodyne.dual_radon(rho, z) <= bound + 1e-8


class TestSampler:
    def test_vacuum_moments(self):
        data = homodyne.sample(vacuum(), 100000, 7)
        assert abs(float(np.mean(data.x))) < 4.0 * math.sqrt(0.5 / 100000)
        assert float(np.var(data.x)) == pytest.approx(0.5, rel=0.05)

    def test_number_state_ks(self):
        data = homodyne.sample(number(1), 100000, 12)
        cdf = lambda x: 0.5 * (1.0 + erf(x)) - x * np.exp(-x * x) / math.sqrt(math.pi)
        assert st.kstest(data.x, cdf).pvalue > 0.01

    def test_phase_uniformity(self):
        data = homodyne.sample(number(2), 10000, 99)
        counts, _ = np.histogram(data.phi, bins=32, range=(0.0, math.pi))
        assert st.chisquare(counts).pvalue > 0.01

    def test_general_state_marginal_ks(self):
        rng = np.random.default_rng(3)
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        spec = states.StateSpec(kind="pure", coeffs=tuple(v))
        data = homodyne.sample_state(spec, 4000, 13)
        rho = states.build(spec)
        grid = np.linspace(-9, 9, 2001)
        phi_nodes, phi_w = gauss_legendre_panels(np.linspace(0, math.pi, 33), 8)
        dens = np.array(
            [
                float(np.sum(phi_w * homodyne.pdf(rho, np.full(phi_nodes.size, xv), phi_nodes)))
                for xv in grid
            ]
        ) / math.pi
        cdf_tab = cumulative_trapezoid(dens, grid, initial=0.0)
        cdf_tab /= cdf_tab[-1]
        assert st.kstest(data.x, lambda x: np.interp(x, grid, cdf_tab)).pvalue > 0.01

    def test_determinism_bytes(self, tmp_path):
        spec = states.StateSpec(kind="number", k=1)
        a = homodyne.sample_state(spec, 1000, 42)
        b = homodyne.sample_state(spec, 1000, 42)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.phi, b.phi)
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        homodyne.write_samples_csv(pa, a)
        homodyne.write_samples_csv(pb, b)
        assert pa.read_bytes() == pb.read_bytes()
        assert (tmp_path / "a.csv.json").read_text() == (
            tmp_path / "b.csv.json"
        ).read_text()

    def test_truncation_guard(self):
        lossy = states.build(
            states.StateSpec(kind="diagonal", weights=(0.6, 0.3))
        )
        with pytest.raises(TruncationTooSmall):
            homodyne.sample(lossy, 10, 0)

    def test_alpha_continuum_body_ks(self):
        # conditional distribution on |x| <= 50 against the analytic density
        spec = states.StateSpec(kind="alpha", alpha=0.25, dim=128)
        data = homodyne.sample_state(spec, 50000, 31)
        from qht.minimax import p_alpha_many

        grid = np.linspace(0.0, 50.0, 4001)
        dens = 2.0 * p_alpha_many(0.25, grid)
        cdf_half = cumulative_trapezoid(dens, grid, initial=0.0)
        cdf_half /= cdf_half[-1]

        def cond_cdf(x):
            x = np.asarray(x, dtype=float)
            half = np.interp(np.abs(x), grid, cdf_half)
            return 0.5 + 0.5 * np.sign(x) * half

        inner = data.x[np.abs(data.x) <= 50.0]
        assert st.kstest(inner, cond_cdf).pvalue > 0.01

    def test_seed_validation(self):
        with pytest.raises(DomainError):
            homodyne.sample(vacuum(), 10, -1)
        with pytest.raises(DomainError):
            homodyne.sample(vacuum(), 0, 1)


class TestLipschitzAverage:
    def test_zero_at_equal_points(self):
        assert homodyne.averaged_radon_lipschitz(vacuum(), 1.3, 1.3) == 0.0

    def test_vacuum_closed_form(self):
        # phase-independent density: integral is pi |p(x) - p(y)|
        val = homodyne.averaged_radon_lipschitz(vacuum(), 0.0, 0.1)
        exact = math.pi * (1.0 - math.exp(-0.01)) / math.sqrt(math.pi)
        assert val == pytest.approx(exact, rel=1e-8)

    def test_ratio_bounded_over_random_pairs(self):
        rng = np.random.default_rng(17)
        rho = states.build(
            states.StateSpec(kind="diagonal", weights=(0.4, 0.3, 0.2, 0.1))
        )
        ratios = []
        for _ in range(40):
            x, y = rng.uniform(-4, 4, size=2)
            if abs(x - y) < 1e-3:
                continue
            ratios.append(
                homodyne.averaged_radon_lipschitz(rho, x, y) / abs(x - y)
            )
        assert max(ratios) < 5.0


class TestCsvRoundtrip:
    def test_write_read(self, tmp_path):
        spec = states.StateSpec(kind="number", k=1)
        data = homodyne.sample_state(spec, 200, 5)
        path = tmp_path / "s.csv"
        homodyne.write_samples_csv(path, data)
        back = homodyne.read_samples_csv(path)
        assert np.array_equal(back.x, data.x)
        assert np.array_equal(back.phi, data.phi)
        assert back.seed == 5
        assert back.state_spec == spec
        header = path.read_text().splitlines()[0]
        assert header == "x,phi"
