import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrelax import core
from gaussrelax import trace_opt as to
from gaussrelax.errors import ContractError, DomainError, InvalidDimensionError, NotSymplecticError


def brute_extremes(alpha, beta):
    n = len(alpha)
    values = []
    for perm in itertools.permutations(range(n)):
        P = np.eye(n)[list(perm)]
        values.append(alpha @ P @ beta)
    return max(values), min(values)


class TestZeta:
    def test_unit(self):
        assert to.zeta_plus(1.0) == 1.0 and to.zeta_minus(1.0) == 0.0

    def test_two(self):
        assert to.zeta_plus(2.0) == pytest.approx(2.125)

    @pytest.mark.parametrize("z", [1.0, 1.5, 3.0, 10.0])
    def test_hyperbolic_identity(self, z):
        assert to.zeta_plus(z) ** 2 - to.zeta_minus(z) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            to.zeta_plus(0.5)


class TestSupInf:
    def test_no_squeezing(self):
        sup = to.trace_sup([3.0, 1.0], [1.0, 1.0])
        assert sup.value == pytest.approx(8.0)
        np.testing.assert_array_equal(sup.S_star, np.eye(4))
        assert sup.value == to.trace_inf([3.0, 1.0]).value

    def test_single_mode(self):
        assert to.trace_sup([3.0], [2.0]).value == pytest.approx(12.75)

    def test_inf_values(self):
        assert to.trace_inf([3.0]).value == 6.0
        assert to.trace_inf([5.0, 1.0]).value == 12.0

    def test_inf_attained_by_passive(self, rng):
        R = core.random_orthosymplectic(2, rng)
        assert to.trace_term(R, [5.0, 1.0]) == pytest.approx(12.0, rel=1e-10)

    def test_monte_carlo_two_modes(self):
        ys, zbars = [5.0, 1.0], [3.0, 2.0]
        sup = to.trace_sup(ys, zbars).value
        inf = to.trace_inf(ys).value
        samples = to.sample_budgeted_traces(ys, zbars, 100_000, seed=7)
        assert samples.max() <= sup + 1e-9
        assert samples.min() >= inf - 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_attainment(self, rng, n):
        ys = np.sort(rng.uniform(0.5, 5.0, n))[::-1]
        zbars = np.sort(rng.uniform(1.0, 4.0, n))[::-1]
        for ext in (to.trace_sup(ys, zbars), to.trace_inf(ys)):
            assert core.is_symplectic(ext.S_star)
            assert to.trace_term(ext.S_star, ys) == pytest.approx(ext.value, rel=1e-10)

    def test_sandwich(self, rng):
        for n in (1, 2, 3):
            ys = np.sort(rng.uniform(0.5, 5.0, n))[::-1]
            zbars = np.sort(rng.uniform(1.0, 3.0, n))[::-1]
            samples = to.sample_budgeted_traces(ys, zbars, 10_000, seed=n)
            assert samples.max() <= to.trace_sup(ys, zbars).value + 1e-9
            assert samples.min() >= to.trace_inf(ys).value - 1e-9

    def test_unsorted_rejected(self):
        with pytest.raises(ContractError):
            to.trace_sup([1.0, 5.0], [3.0, 2.0])
        with pytest.raises(ContractError):
            to.trace_sup([5.0, 1.0], [2.0, 3.0])
        with pytest.raises(ContractError):
            to.trace_inf([1.0, 5.0])

    def test_length_mismatch(self):
        with pytest.raises(InvalidDimensionError):
            to.trace_sup([5.0, 1.0], [3.0])

    def test_rearrangement(self, rng):
        ys = rng.uniform(0.5, 5.0, 4)
        zbars = rng.uniform(1.0, 3.0, 4)
        ref = to.trace_sup(np.sort(ys)[::-1], np.sort(zbars)[::-1]).value
        for _ in range(5):
            p, q = rng.permutation(4), rng.permutation(4)
            value = to.trace_sup(ys[p][to.descending_order(ys[p])], zbars[q][to.descending_order(zbars[q])]).value
            assert value == ref
        # the sorted pairing beats every other assignment of budgets to modes
        ys_d, zb_d = np.sort(ys)[::-1], np.sort(zbars)[::-1]
        for perm in itertools.permutations(range(4)):
            other = sum(2 * to.zeta_plus(zb_d[j]) * ys_d[i] for i, j in enumerate(perm))
            assert other <= ref + 1e-12


@settings(max_examples=60, deadline=None)
@given(
    ys=st.lists(st.floats(0.1, 10.0), min_size=1, max_size=4),
    data=st.data(),
)
def test_sup_monotone(ys, data):
    n = len(ys)
    zbars = data.draw(st.lists(st.floats(1.0, 5.0), min_size=n, max_size=n))
    i = data.draw(st.integers(0, n - 1))
    bump = data.draw(st.floats(0.0, 2.0))
    ys_d, zb_d = sorted(ys, reverse=True), sorted(zbars, reverse=True)
    base = to.trace_sup(ys_d, zb_d).value
    zb_up = list(zb_d)
    zb_up[i] += bump
    y_up = list(ys_d)
    y_up[i] += bump
    assert to.trace_sup(ys_d, sorted(zb_up, reverse=True)).value >= base - 1e-12 * base
    assert to.trace_sup(sorted(y_up, reverse=True), zb_d).value >= base - 1e-12 * base


class TestBistochastic:
    def test_two(self):
        assert to.bistochastic_extremes([1, 2], [10, 20]) == (50.0, 40.0)

    def test_constant(self):
        sup, inf = to.bistochastic_extremes([1.5] * 4, [1.5] * 4)
        assert sup == inf == 4 * 1.5**2

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_brute_force(self, rng, n):
        for _ in range(20):
            alpha, beta = rng.normal(size=n), rng.normal(size=n)
            assert to.bistochastic_extremes(alpha, beta) == pytest.approx(brute_extremes(alpha, beta), abs=1e-12)

    def test_birkhoff_combinations_inside(self, rng):
        alpha, beta = rng.normal(size=4), rng.normal(size=4)
        sup, inf = to.bistochastic_extremes(alpha, beta)
        perms = [np.eye(4)[list(p)] for p in itertools.permutations(range(4))]
        for _ in range(500):
            w = rng.dirichlet(np.ones(len(perms)))
            X = sum(wi * P for wi, P in zip(w, perms))
            assert inf - 1e-12 <= alpha @ X @ beta <= sup + 1e-12

    def test_mismatch(self):
        with pytest.raises(InvalidDimensionError):
            to.bistochastic_extremes([1, 2], [1])


class TestUnistochastic:
    def test_trivial_squeezing(self, rng):
        R = core.random_orthosymplectic(3, rng)
        assert to.verify_unistochastic_reduction([1, 1, 1], R, [3.0, 2.0, 1.0]) < 1e-10

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_random(self, rng, n):
        for _ in range(10):
            zs = rng.uniform(1, 3, n)
            R = core.random_orthosymplectic(n, rng)
            ys = rng.uniform(0.5, 4, n)
            assert to.verify_unistochastic_reduction(zs, R, ys) < 1e-9

    def test_row_column_sums(self, rng):
        P = to.unistochastic_from_passive(core.random_orthosymplectic(3, rng))
        np.testing.assert_allclose(P.sum(axis=0), 1.0, atol=1e-9)
        np.testing.assert_allclose(P.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(P >= 0)

    def test_recovers_unitary(self, rng):
        U = core.random_unitary(3, rng)
        P = to.unistochastic_from_passive(core.orthosymplectic_from_unitary(U))
        # the representation may carry U or its conjugate; |.|^2 is the same
        np.testing.assert_allclose(P, np.abs(U) ** 2, atol=1e-12)

    def test_rejects_squeezer(self):
        with pytest.raises(NotSymplecticError):
            to.unistochastic_from_passive(np.diag([2.0, 0.5]))
