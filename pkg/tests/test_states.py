import json
import math

import numpy as np
import pytest

from qht import states
from qht.errors import DomainError, InvalidSpec
from qht.specfun import quad_adaptive


class TestBuild:
    def test_single_photon(self):
        rho = states.build(states.StateSpec(kind="number", k=1))
        assert rho.matrix[1, 1] == 1.0
        assert np.count_nonzero(rho.matrix) == 1
        assert rho.trace() == 1.0

    def test_vacuum_diagonal(self):
        rho = states.build(states.StateSpec(kind="diagonal", weights=(1.0,)))
        assert rho.trace() == 1.0
        assert rho.is_diagonal

    def test_pure_superposition(self):
        amp = 1.0 / math.sqrt(2.0)
        rho = states.build(states.StateSpec(kind="pure", coeffs=(amp, amp)))
        assert np.allclose(rho.matrix, 0.5 * np.ones((2, 2)), atol=1e-15)

    def test_negative_weight_rejected(self):
        with pytest.raises(InvalidSpec):
            states.StateSpec(kind="diagonal", weights=(0.5, -0.1)).validate()

    def test_unnormalized_pure_rejected(self):
        with pytest.raises(InvalidSpec):
            states.StateSpec(kind="pure", coeffs=(1.0, 1.0)).validate()

    def test_non_psd_matrix_rejected(self):
        spec = states.StateSpec(
            kind="matrix",
            matrix_re=((0.8, 0.9), (0.9, 0.2)),
            matrix_im=((0.0, 0.0), (0.0, 0.0)),
        )
        with pytest.raises(InvalidSpec):
            states.build(spec)

    def test_trace_band_enforced(self):
        with pytest.raises(InvalidSpec):
            states.DensityMatrix(np.diag([0.7, 0.2]).astype(complex))
        # accepted once the missing mass is budgeted
        states.DensityMatrix(np.diag([0.7, 0.2]).astype(complex), tail_mass_bound=0.1)

    def test_hermitization_is_exact(self):
        m = np.array([[0.5, 0.1 + 0.2j], [0.1 - 0.2j, 0.5]])
        rho = states.DensityMatrix(m)
        assert np.array_equal(rho.matrix, rho.matrix.conj().T)


class TestSpecSerialization:
    @pytest.mark.parametrize(
        "text",
        [
            '{"type":"number","k":1}',
            '{"type":"diagonal","weights":[0.5,0.25,0.25]}',
            '{"type":"pure","coeffs":[[0.6,0.0],[0.0,0.8]]}',
            '{"type":"alpha","alpha":0.25,"dim":256}',
            '{"type":"hardest","alpha":0.2,"a":1e6,"c":0.0,"dim":64}',
            '{"type":"matrix","re":[[1.0,0.0],[0.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}',
        ],
    )
    def test_roundtrip_exact(self, text):
        spec = states.StateSpec.from_json(text)
        again = states.StateSpec.from_json(spec.to_json())
        assert again == spec

    def test_build_after_roundtrip_identical(self):
        spec = states.StateSpec.from_json('{"type":"diagonal","weights":[0.5,0.5]}')
        a = states.build(spec)
        b = states.build(states.StateSpec.from_json(spec.to_json()))
        assert np.array_equal(a.matrix, b.matrix)

    def test_unknown_type_rejected(self):
        with pytest.raises(InvalidSpec):
            states.StateSpec.from_json('{"type":"squeezed","r":1.0}')


class TestAlphaFamily:
    def test_k0_closed_form(self):
        for alpha in (0.1, 0.25, 0.7, 1.0):
            assert states.alpha_diagonal(alpha, 0) == pytest.approx(
                alpha / (alpha + 1.0), rel=1e-14
            )

    def test_alpha1_k1(self):
        assert states.alpha_diagonal(1.0, 1) == pytest.approx(1.0 / 6.0, rel=1e-14)

    def test_closed_form_vs_quadrature(self):
        alpha, k = 0.2, 50
        val, _ = quad_adaptive(
            lambda z: z**k * alpha * (1.0 - z) ** alpha, 0.0, 1.0, abs_tol=1e-16
        )
        assert states.alpha_diagonal(alpha, k) == pytest.approx(val, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            states.alpha_diagonal(0.0, 1)
        with pytest.raises(DomainError):
            states.alpha_diagonal(1.5, 1)
        with pytest.raises(DomainError):
            states.alpha_diagonal(0.5, -1)

    def test_tail_mass_examples(self):
        assert states.diag_tail_mass((1.0,), 1) == 0.0
        assert states.alpha_tail_mass(1.0, 2) == pytest.approx(1.0 / 3.0, rel=1e-12)
        t1000 = states.alpha_tail_mass(0.25, 1000)
        t2000 = states.alpha_tail_mass(0.25, 2000)
        assert 0.0 < t2000 < t1000

    def test_partial_sum_plus_tail_is_one(self):
        for alpha in (0.25, 0.6, 1.0):
            for dim in (10, 100, 1000):
                total = states.alpha_diagonal_all(alpha, dim - 1).sum()
                assert total + states.alpha_tail_mass(alpha, dim) == pytest.approx(
                    1.0, abs=1e-12
                )

    def test_partial_sums_approach_one(self):
        sums = [
            states.alpha_diagonal_all(0.25, dim - 1).sum()
            for dim in (10, 100, 1000, 10000)
        ]
        assert all(b > a for a, b in zip(sums, sums[1:]))
        assert sums[-1] > 0.88

    def test_power_law_scaling(self):
        # k^(1+alpha) rho_kk settles: <= 10% relative variation on [200, 2000]
        alpha = 0.25
        rho = states.alpha_diagonal_all(alpha, 2000)
        k = np.arange(200, 2001)
        scaled = k ** (1.0 + alpha) * rho[200:]
        assert (scaled.max() - scaled.min()) / scaled.min() < 0.10

    def test_alpha_state_build_carries_tail(self):
        rho = states.build(states.StateSpec(kind="alpha", alpha=0.25, dim=256))
        assert rho.tail_mass_bound == pytest.approx(
            states.alpha_tail_mass(0.25, 256), rel=1e-12
        )
        assert rho.trace() == pytest.approx(1.0 - rho.tail_mass_bound, rel=1e-12)


class TestFockStreaming:
    def test_pdf_matches_built_state_partial_sum(self):
        # n_terms equal to the truncation, no tail model: must match the
        # Hermite-sum density of the built matrix exactly
        from qht.homodyne import pdf

        rho = states.build(states.StateSpec(kind="alpha", alpha=0.25, dim=512))
        x = np.array([0.0, 0.8, 2.2])
        direct = pdf(rho, x, 0.3)
        streamed = states.alpha_fock_pdf(0.25, x, n_terms=512, tail=False)
        assert np.max(np.abs(direct - streamed)) < 1e-13

    def test_tail_model_closes_the_gap(self):
        from qht.minimax import p_alpha_many

        x = np.array([0.0, 0.5, 1.5, 3.0])
        approx = states.alpha_fock_pdf(0.25, x, n_terms=1 << 17)
        exact = p_alpha_many(0.25, x)
        assert np.max(np.abs(approx - exact)) < 1e-8
