import numpy as np
import pytest

from gaussrelax import core
from gaussrelax.errors import NotSymplecticError, UnphysicalStateError
from gaussrelax.invariants import symplectic_eigenvalues
from gaussrelax.williamson import euler_svd, squeezing_measure, williamson


def rel_inf(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


class TestWilliamson:
    def test_thermal(self):
        dec = williamson(np.diag([3.0, 3.0]))
        np.testing.assert_allclose(dec.nus, [3.0])
        assert core.is_orthosymplectic(dec.S)

    def test_squeezed_thermal(self):
        z, nu = 2.0, 3.0
        sigma = np.diag([z**2 * nu, nu / z**2])
        dec = williamson(sigma)
        np.testing.assert_allclose(dec.nus, [3.0], rtol=1e-14)
        assert rel_inf(dec.reconstruct(), sigma) < 1e-14

    def test_two_mode_squeezed(self):
        sigma = core.two_mode_squeezed(2, 0.4)
        dec = williamson(sigma)
        np.testing.assert_allclose(dec.W, 2.0 * np.eye(4), rtol=1e-12)
        assert rel_inf(dec.reconstruct(), sigma) < 1e-10

    def test_rejects_indefinite(self):
        with pytest.raises(UnphysicalStateError):
            williamson(np.diag([1.0, -1.0]))

    def test_pseudo_spectrum(self):
        dec = williamson(np.diag([0.3, 0.3]), physical=False)
        np.testing.assert_allclose(dec.nus, [0.3])

    def test_round_trip_random(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 5))
            sigma = core.random_covariance(n, rng, nu_max=5.0, z_max=6.0)
            dec = williamson(sigma)
            assert rel_inf(dec.reconstruct(), sigma) < 1e-8
            assert core.is_symplectic(dec.S, 1e-9 * max(1.0, np.max(np.abs(dec.S)) ** 2))
            assert np.all(np.diff(dec.nus) <= 0)
            np.testing.assert_allclose(dec.nus, symplectic_eigenvalues(sigma), rtol=1e-8)

    @pytest.mark.parametrize("target_cond", [1e2, 1e4, 1e6])
    def test_ill_conditioned(self, rng, target_cond):
        # cond(sigma) = nu_max/nu_min * z^4 for a single squeezed mode
        z = target_cond**0.25
        for n in (1, 2, 4):
            zs = np.ones(n)
            zs[0] = z
            S = core.random_orthosymplectic(n, rng) @ core.squeezer(zs) @ core.random_orthosymplectic(n, rng)
            sigma = S @ core.block_form(rng.uniform(1, 1.5, n)) @ S.T
            sigma = 0.5 * (sigma + sigma.T)
            dec = williamson(sigma)
            assert rel_inf(dec.reconstruct(), sigma) < 1e-8

    def test_degenerate_spectrum(self, rng):
        S = core.random_symplectic(3, rng)
        sigma = S @ (2.0 * np.eye(6)) @ S.T
        dec = williamson(sigma)
        np.testing.assert_allclose(dec.nus, [2.0, 2.0, 2.0], rtol=1e-10)
        assert rel_inf(dec.reconstruct(), sigma) < 1e-10


class TestEuler:
    def test_identity(self):
        dec = euler_svd(np.eye(4))
        np.testing.assert_allclose(dec.zs, [1.0, 1.0])
        np.testing.assert_allclose(dec.reconstruct(), np.eye(4), atol=1e-14)

    def test_single_squeezer(self):
        dec = euler_svd(np.diag([4.0, 0.25]))
        np.testing.assert_allclose(dec.zs, [4.0])
        np.testing.assert_allclose(dec.reconstruct(), np.diag([4.0, 0.25]), atol=1e-14)

    def test_recover_known_squeezing(self, rng):
        S = core.random_orthosymplectic(2, rng) @ core.squeezer([1.5, 3.0]) @ core.random_orthosymplectic(2, rng)
        dec = euler_svd(S)
        np.testing.assert_allclose(dec.zs, [3.0, 1.5], rtol=1e-8)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_round_trip(self, rng, n):
        for _ in range(30):
            S = core.random_symplectic(n, rng, z_max=10.0)
            dec = euler_svd(S)
            assert rel_inf(dec.reconstruct(), S) < 1e-8
            assert core.is_orthosymplectic(dec.R1)
            assert core.is_orthosymplectic(dec.R2)
            assert np.all(dec.zs >= 1.0)
            assert np.all(np.diff(dec.zs) <= 0)

    def test_partially_unsqueezed(self, rng):
        S = core.random_symplectic(3, rng, zs=[2.5, 1.0, 1.0])
        dec = euler_svd(S)
        np.testing.assert_allclose(dec.zs, [2.5, 1.0, 1.0], rtol=1e-8)
        assert rel_inf(dec.reconstruct(), S) < 1e-8

    def test_rejects_non_symplectic(self):
        with pytest.raises(NotSymplecticError):
            euler_svd(np.diag([2.0, 1.0]))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reciprocal_pairs(self, rng, n):
        S = core.random_symplectic(n, rng, z_max=5.0)
        ev = np.sort(np.linalg.eigvalsh(S.T @ S))
        np.testing.assert_allclose(ev * ev[::-1], np.ones(2 * n), rtol=1e-8)


class TestSqueezingMeasure:
    def test_passive(self, rng):
        assert squeezing_measure(core.random_orthosymplectic(3, rng)) == pytest.approx(0.0, abs=1e-12)

    def test_single(self):
        assert squeezing_measure(np.diag([2.0, 0.5])) == pytest.approx(3.0)

    def test_orthogonal_invariance(self, rng):
        Z = core.squeezer([2.2, 1.3])
        S = core.random_orthosymplectic(2, rng) @ Z @ core.random_orthosymplectic(2, rng)
        assert squeezing_measure(S) == pytest.approx(squeezing_measure(Z), rel=1e-10)
        assert squeezing_measure(S) == pytest.approx(euler_svd(S).zs[0] ** 2 - 1, rel=1e-8)

    def test_rejects_non_symplectic(self):
        with pytest.raises(NotSymplecticError):
            squeezing_measure(np.eye(2) * 2)
