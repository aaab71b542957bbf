import random
from fractions import Fraction

import pytest

from tusolve import (
    certify_unique,
    coalition_of,
    is_prekernel,
    prekernel_point,
    prekernel_residual,
    profile_preserving_step,
    quadratic_system,
    surplus_profile,
)
from tusolve.linalg import Matrix, pseudo_inverse, rank, rref
from tusolve.prenucleolus import prenucleolus

from helpers import TWO_PLAYER, BASE_POINT, random_game


@pytest.fixture(scope="module")
def base_profile(base_game):
    return surplus_profile(base_game, BASE_POINT)


@pytest.fixture(scope="module")
def base_system(base_game, base_profile):
    return quadratic_system(base_game, base_profile)


class TestSurplusProfile:
    def test_base_game_union(self, base_profile):
        expected = {
            coalition_of(c) for c in ([2], [3], [4], [1, 2], [1, 3, 4])
        }
        assert set(base_profile.union()) == expected
        # sorted smallest-first: singletons, then the pair, then the triple
        assert list(base_profile.union()) == sorted(expected, key=lambda m: (bin(m).count("1"), m))

    def test_two_player(self):
        prof = surplus_profile(TWO_PLAYER, (Fraction(1), Fraction(1)))
        assert prof.get(1, 2) == coalition_of([1])
        assert prof.get(2, 1) == coalition_of([2])

    def test_same_class_same_profile(self, base_game, base_profile):
        # a nearby payoff reached by a verified interior step keeps the profile
        d = (Fraction(-1), Fraction(1), Fraction(0), Fraction(0))
        step = profile_preserving_step(base_game, BASE_POINT, base_profile, d)
        assert step is not None and step > 0
        moved = tuple(x + (step / 2) * di for x, di in zip(BASE_POINT, d))
        assert surplus_profile(base_game, moved) == base_profile

    def test_cardinality(self, base_profile):
        assert len(base_profile.selected) == 12
        with pytest.raises(ValueError):
            base_profile.get(1, 1)

    def test_min_cardinality_then_lex_tiebreak(self):
        # all excesses tie at zero in an additive game: singletons win
        from tusolve import TuGame

        v = TuGame.from_coalition_values(3, {(1,): 1, (2,): 1, (3,): 1, (1, 2): 2, (1, 3): 2, (2, 3): 2, (1, 2, 3): 3})
        prof = surplus_profile(v, (1, 1, 1))
        for i, j in prof.pairs():
            assert prof.get(i, j) == coalition_of([i])


class TestQuadraticSystem:
    def test_dimensions(self, base_system):
        assert base_system.e_matrix.nrows == 4 and base_system.e_matrix.ncols == 7
        assert base_system.q == 7

    def test_two_player_construction(self):
        prof = surplus_profile(TWO_PLAYER, (Fraction(1), Fraction(1)))
        sys = quadratic_system(TWO_PLAYER, prof)
        assert sys.e_matrix == Matrix.from_rows([[-1, -1], [1, -1]])
        assert sys.alpha_vec == (0, 2)

    def test_full_rank_at_prekernel_class(self, base_system):
        assert rref(base_system.e_matrix.transpose())[1] == 4

    def test_q_is_2eet_with_small_integers(self, base_system):
        e = base_system.e_matrix
        assert base_system.q_matrix == (e @ e.transpose()).scale(2)
        n = base_system.n
        for row in base_system.q_matrix.rows:
            for entry in row:
                assert entry.denominator == 1
                assert abs(entry) <= n * (n - 1)

    def test_residual_zero_at_point(self, base_system):
        assert base_system.residual(BASE_POINT) == 0

    def test_residual_forms_agree(self, base_system):
        rng = random.Random(9)
        for _ in range(100):
            x = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(4))
            assert base_system.residual(x) == base_system.residual_via_form(x)

    def test_two_player_residual_value(self):
        prof = surplus_profile(TWO_PLAYER, (Fraction(1), Fraction(1)))
        sys = quadratic_system(TWO_PLAYER, prof)
        assert sys.residual((2, 0)) == 4

    def test_residual_matches_game_residual_on_own_class(self, base_game, base_system):
        # on the class of BASE_POINT the system quadratic equals the full residual
        assert base_system.residual(BASE_POINT) == prekernel_residual(base_game, BASE_POINT)
        d = (Fraction(0), Fraction(1), Fraction(-1), Fraction(0))
        step = profile_preserving_step(base_game, BASE_POINT, base_system.profile, d)
        moved = tuple(x + (step / 2) * di for x, di in zip(BASE_POINT, d))
        assert base_system.residual(moved) == prekernel_residual(base_game, moved)


class TestMinimize:
    def test_base_game_unique_minimizer(self, base_system):
        xstar, basis = base_system.minimize()
        assert xstar == BASE_POINT
        assert basis == []

    def test_two_player(self):
        prof = surplus_profile(TWO_PLAYER, (Fraction(1), Fraction(1)))
        xstar, _ = quadratic_system(TWO_PLAYER, prof).minimize()
        assert xstar == (1, 1)

    def test_rank_deficient_class(self, segment_game):
        mid = (Fraction(1), Fraction(1), Fraction(1), Fraction(1))
        sys = quadratic_system(segment_game, surplus_profile(segment_game, mid))
        assert rref(sys.e_matrix.transpose())[1] < 4
        xstar, basis = sys.minimize()
        # the normal equations still hold exactly at the minimum-norm solution
        qx = sys.q_matrix.apply(xstar)
        assert all(qi + ai == 0 for qi, ai in zip(qx, sys.a_vec))
        assert len(basis) >= 1
        for z in basis:
            assert all(val == 0 for val in sys.q_matrix.apply(z))


class TestProjection:
    def test_idempotent_self_adjoint(self, base_system):
        p = base_system.projection()
        assert p @ p == p
        assert p.transpose() == p
        assert p != Matrix.identity(base_system.q)
        assert rank(p) <= base_system.n

    def test_projection_fixes_sign_matrix(self, base_system):
        et = base_system.e_matrix.transpose()
        assert base_system.projection() @ et == et

    def test_projection_fixes_alpha_at_prekernel_class(self, base_system):
        p = base_system.projection()
        assert p.apply(base_system.alpha_vec) == base_system.alpha_vec

    def test_pinv_transpose_identity(self, base_system):
        lhs = pseudo_inverse(base_system.e_matrix.transpose())
        rhs = (pseudo_inverse(base_system.q_matrix) @ base_system.e_matrix).scale(2)
        assert lhs == rhs

    def test_minimizer_maps_to_projected_alpha(self, base_system):
        xstar, _ = base_system.minimize()
        et_x = base_system.e_matrix.transpose().apply(xstar)
        p_alpha = base_system.projection().apply(base_system.alpha_vec)
        assert tuple(-v for v in et_x) == tuple(p_alpha)

    def test_xi_vector(self, base_system):
        assert base_system.xi_vector(BASE_POINT) == tuple([Fraction(0)] * base_system.q)
        gamma = (Fraction(4), Fraction(4), Fraction(4), Fraction(4))
        et_g = base_system.e_matrix.transpose().apply(gamma)
        assert base_system.xi_vector(gamma) == tuple(a + b for a, b in zip(base_system.alpha_vec, et_g))


class TestPrekernelPoint:
    def test_base_game(self, base_game):
        assert prekernel_point(base_game) == BASE_POINT

    def test_two_player(self):
        assert prekernel_point(TWO_PLAYER) == (1, 1)

    def test_random_three_player_matches_sequential_solver(self):
        rng = random.Random(10)
        for _ in range(12):
            v = random_game(3, rng)
            x = prekernel_point(v)
            assert prekernel_residual(v, x) == 0
            assert x == prenucleolus(v)

    def test_segment_game_returns_a_prekernel_point(self, segment_game):
        x = prekernel_point(segment_game)
        assert is_prekernel(segment_game, x)


class TestCertifyUnique:
    def test_base_game_certificate(self, base_game):
        cert = certify_unique(base_game, BASE_POINT)
        assert cert is not None
        assert cert.rank_full and cert.balanced_levels
        assert len(cert.interior_steps) == 14  # 12 pair directions + two scalings
        assert all(step > 0 for _, step in cert.interior_steps)

    def test_requires_prekernel_point(self, base_game):
        with pytest.raises(ValueError):
            certify_unique(base_game, (4, 4, 4, 4))

    def test_segment_game_interior_point_inconclusive(self, segment_game):
        mid = (Fraction(1), Fraction(1), Fraction(1), Fraction(1))
        assert is_prekernel(segment_game, mid)
        assert certify_unique(segment_game, mid) is None

    def test_segment_game_boundary_point_inconclusive(self, segment_game):
        edge = (Fraction(2), Fraction(2), Fraction(0), Fraction(0))
        assert is_prekernel(segment_game, edge)
        # rank is full here; interiority is what fails
        sys = quadratic_system(segment_game, surplus_profile(segment_game, edge))
        assert rref(sys.e_matrix.transpose())[1] == 4
        assert certify_unique(segment_game, edge) is None


class TestProfilePreservingStep:
    def test_boundary_direction_is_zero(self, segment_game):
        edge = (Fraction(2), Fraction(2), Fraction(0), Fraction(0))
        prof = surplus_profile(segment_game, edge)
        d = (Fraction(1), Fraction(-1), Fraction(0), Fraction(0))
        assert profile_preserving_step(segment_game, edge, prof, d) == 0

    def test_interior_steps_positive(self, base_game, base_profile):
        for i, j in base_profile.pairs():
            d = [Fraction(0)] * 4
            d[i - 1] = Fraction(-1)
            d[j - 1] = Fraction(1)
            step = profile_preserving_step(base_game, BASE_POINT, base_profile, tuple(d))
            assert step is None or step > 0
