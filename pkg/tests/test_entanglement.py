import math

import numpy as np
import pytest
from conftest import centered_difference, random_state
from scipy.linalg import block_diag

from gaussrelax import core
from gaussrelax.entanglement import (
    Bipartition,
    partial_transpose,
    pt_symplectic_eigenvalues,
    sigma_tilde_indicator,
    sigma_tilde_rate,
)
from gaussrelax.errors import InvalidDimensionError, UnphysicalStateError
from gaussrelax.invariants import symplectic_eigenvalues

SPLITS = [(1, 1), (1, 2), (2, 1)]


class TestBipartition:
    def test_transposer_involution(self):
        T = Bipartition(2, 1).transposer()
        np.testing.assert_array_equal(T @ T, np.eye(6))

    def test_rejects_empty_party(self):
        with pytest.raises(InvalidDimensionError):
            Bipartition(0, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidDimensionError):
            partial_transpose(np.eye(4), Bipartition(1, 2))


class TestPartialTranspose:
    @pytest.mark.parametrize("p,q", SPLITS)
    def test_involution(self, rng, p, q):
        part = Bipartition(p, q)
        sigma = random_state(rng, p + q)
        twice = partial_transpose(partial_transpose(sigma, part), part, physical=False)
        np.testing.assert_array_equal(twice, sigma)

    def test_relaxed_input_still_checked(self):
        with pytest.raises(UnphysicalStateError):
            partial_transpose(-np.eye(4), Bipartition(1, 1), physical=False)

    def test_product_state_spectrum(self, rng):
        a, b = random_state(rng, 1), random_state(rng, 1)
        sigma = block_diag(a, b)
        np.testing.assert_allclose(
            pt_symplectic_eigenvalues(sigma, Bipartition(1, 1)), symplectic_eigenvalues(sigma), rtol=1e-10
        )

    @pytest.mark.parametrize("r", [0.1, 0.4, 1.0])
    def test_two_mode_squeezed_spectrum(self, r):
        nus = pt_symplectic_eigenvalues(core.two_mode_squeezed(1, r), Bipartition(1, 1))
        np.testing.assert_allclose(nus, [math.exp(2 * r), math.exp(-2 * r)], rtol=1e-10)

    def test_positive_definite(self, rng):
        st = partial_transpose(random_state(rng, 3), Bipartition(1, 2))
        assert np.linalg.eigvalsh(st)[0] > 0


class TestIndicator:
    def test_vacuum_boundary(self):
        assert sigma_tilde_indicator(core.vacuum(2), Bipartition(1, 1)) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("r", [0.1, 0.4, 1.0])
    def test_two_mode_squeezed_entangled(self, r):
        value = sigma_tilde_indicator(core.two_mode_squeezed(1, r), Bipartition(1, 1))
        expected = (math.exp(4 * r) - 1) * (math.exp(-4 * r) - 1)
        assert value == pytest.approx(expected, rel=1e-10)
        assert value < 0

    @pytest.mark.parametrize("p,q", SPLITS)
    def test_thermal_product_separable(self, p, q):
        nus = np.linspace(1.2, 3.0, p + q)
        assert sigma_tilde_indicator(core.thermal(p + q, nus), Bipartition(p, q)) >= 0

    @pytest.mark.parametrize("p,q", SPLITS)
    def test_equals_product_form(self, rng, p, q):
        part = Bipartition(p, q)
        sigma = random_state(rng, p + q)
        nus = pt_symplectic_eigenvalues(sigma, part)
        assert sigma_tilde_indicator(sigma, part) == pytest.approx(np.prod(nus**2 - 1), rel=1e-8, abs=1e-9)

    def test_ppt_consistency(self, rng):
        checked = 0
        for _ in range(500):
            n = int(rng.integers(2, 4))
            p = int(rng.integers(1, n))
            part = Bipartition(p, n - p) if rng.random() < 0.5 else Bipartition(1, n - 1)
            sigma = random_state(rng, n, nu_max=1.5, z_max=2.0)
            ind = sigma_tilde_indicator(sigma, part)
            margin = pt_symplectic_eigenvalues(sigma, part)[-1] - 1.0
            if abs(margin) < 1e-9 or abs(ind) < 1e-9:
                continue
            if min(part.p, part.q) == 1:
                assert np.sign(ind) == np.sign(margin)
                checked += 1
        assert checked > 400


class TestRate:
    @pytest.mark.parametrize("chi", [1.0, 2.0])
    def test_fixed_point(self, chi):
        part = Bipartition(1, 1)
        sigma = chi * np.eye(4)
        fd, _ = centered_difference(lambda s: sigma_tilde_indicator(s, part), sigma, chi)
        assert sigma_tilde_rate(sigma, part, chi) == pytest.approx(0.0, abs=1e-10)
        assert fd == pytest.approx(0.0, abs=1e-6)

    def test_loss_drives_toward_separability(self):
        part = Bipartition(1, 1)
        sigma = core.two_mode_squeezed(1, 0.4)
        rate = sigma_tilde_rate(sigma, part, 1.0)
        fd, mid = centered_difference(lambda s: sigma_tilde_indicator(s, part), sigma, 1.0)
        assert rate > 0
        assert sigma_tilde_rate(mid, part, 1.0) == pytest.approx(fd, rel=1e-5)

    @pytest.mark.parametrize("p,q", SPLITS + [(2, 2)])
    def test_matches_finite_difference(self, rng, p, q):
        part = Bipartition(p, q)
        for _ in range(15):
            sigma = random_state(rng, p + q)
            chi = float(rng.uniform(1.0, 3.0))
            fd, mid = centered_difference(lambda s: sigma_tilde_indicator(s, part), sigma, chi)
            assert sigma_tilde_rate(mid, part, chi) == pytest.approx(fd, rel=1e-5, abs=1e-8)
