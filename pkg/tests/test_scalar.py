import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simpow.errors import AmbiguousSnapError, NotInvertibleError
from simpow.scalar import (
    ExponentPair,
    Residue,
    RootOfUnity,
    _candidates_at_order,
    mod_inverse,
    phi_k,
    rou_mul,
    rou_pow,
    rou_to_complex,
    snap_to_root_of_unity,
)


class TestRootOfUnity:
    def test_normalization(self):
        assert RootOfUnity(7, 5) == RootOfUnity(2, 5)
        assert RootOfUnity(2, 4) == RootOfUnity(1, 2)
        assert RootOfUnity(5, 5) == RootOfUnity(0, 1)
        assert RootOfUnity(-1, 5) == RootOfUnity(4, 5)

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            RootOfUnity(1, 0)

    def test_str_round_trip(self):
        assert RootOfUnity.from_str("3/8") == RootOfUnity(3, 8)
        assert str(RootOfUnity(3, 8)) == "3/8"


class TestRouMul:
    def test_identity(self):
        assert rou_mul(RootOfUnity(0, 1), RootOfUnity(0, 1)) == RootOfUnity(0, 1)

    def test_inverse_pair(self):
        assert rou_mul(RootOfUnity(1, 5), RootOfUnity(4, 5)) == RootOfUnity(0, 1)

    def test_rational_addition(self):
        # 1/5 + 1/3 = 8/15; confirmed against complex multiplication
        result = rou_mul(RootOfUnity(1, 5), RootOfUnity(1, 3))
        assert result == RootOfUnity(8, 15)
        product = rou_to_complex(RootOfUnity(1, 5)) * rou_to_complex(RootOfUnity(1, 3))
        assert abs(rou_to_complex(result) - product) < 1e-14


class TestRouPow:
    def test_order_annihilates(self):
        assert rou_pow(RootOfUnity(1, 5), 5) == RootOfUnity(0, 1)

    def test_conjugate(self):
        assert rou_pow(RootOfUnity(1, 5), -1) == RootOfUnity(4, 5)

    def test_cube_of_eighth_root(self):
        result = rou_pow(RootOfUnity(1, 8), 3)
        assert result == RootOfUnity(3, 8)
        assert abs(rou_to_complex(result) - rou_to_complex(RootOfUnity(1, 8)) ** 3) < 1e-12

    def test_zero_power(self):
        assert rou_pow(RootOfUnity(3, 7), 0) == RootOfUnity(0, 1)


class TestRouToComplex:
    def test_one(self):
        assert rou_to_complex(RootOfUnity(0, 1)) == 1.0 + 0.0j

    def test_minus_one(self):
        assert rou_to_complex(RootOfUnity(1, 2)) == pytest.approx(-1.0 + 0.0j)

    def test_fifth_root(self):
        z = rou_to_complex(RootOfUnity(1, 5))
        assert z.real == pytest.approx(math.cos(2 * math.pi / 5), abs=1e-12)
        assert z.imag == pytest.approx(math.sin(2 * math.pi / 5), abs=1e-12)


class TestSnap:
    def test_near_minus_one(self):
        assert snap_to_root_of_unity(complex(-1 + 1e-12, 0), 10, 1e-9) == RootOfUnity(1, 2)

    def test_fifth_root(self):
        z = complex(0.309017, 0.951057)
        assert snap_to_root_of_unity(z, 10, 1e-6) == RootOfUnity(1, 5)

    def test_off_circle(self):
        assert snap_to_root_of_unity(complex(0.5, 0.5), 10, 1e-9) is None

    def test_zero_input(self):
        assert snap_to_root_of_unity(0j, 10, 1e-9) is None

    def test_order_exceeds_bound(self):
        z = rou_to_complex(RootOfUnity(1, 7))
        assert snap_to_root_of_unity(z, 6, 1e-9) is None
        assert snap_to_root_of_unity(z, 7, 1e-9) == RootOfUnity(1, 7)

    def test_smallest_order_preferred(self):
        # both 1/2 and nothing smaller lie in a generous tolerance around -1
        assert snap_to_root_of_unity(-1 + 0j, 100, 0.5) == RootOfUnity(1, 2)

    def test_huge_max_order(self):
        # continued-fraction search keeps this cheap even for huge bounds
        z = rou_to_complex(RootOfUnity(3, 95))
        assert snap_to_root_of_unity(z, 10**12, 1e-9) == RootOfUnity(3, 95)

    def test_candidate_counting_flags_ambiguity(self):
        # white-box: the guard fires when an interval holds two same-order angles
        assert _candidates_at_order(Fraction(1, 5), Fraction(2, 5), 5) == 2
        assert _candidates_at_order(Fraction(3, 10), Fraction(7, 20), 5) == 0
        assert _candidates_at_order(Fraction(-1, 2), Fraction(1, 2), 1) == 1
        assert isinstance(AmbiguousSnapError("x"), ValueError)

    def test_bad_params(self):
        with pytest.raises(ValueError):
            snap_to_root_of_unity(1 + 0j, 0, 1e-9)
        with pytest.raises(ValueError):
            snap_to_root_of_unity(1 + 0j, 5, 0.0)


class TestModInverse:
    def test_two_mod_five(self):
        assert mod_inverse(2, 5) == Residue(3, 5)

    def test_one_mod_seven(self):
        assert mod_inverse(1, 7) == Residue(1, 7)

    def test_not_invertible(self):
        with pytest.raises(NotInvertibleError):
            mod_inverse(3, 9)

    def test_trivial_ring(self):
        assert mod_inverse(42, 1) == Residue(0, 1)

    def test_negative_argument(self):
        inv = mod_inverse(-2, 5)
        assert (-2 * inv.value) % 5 == 1


class TestExponentPair:
    def test_valid(self):
        ExponentPair(2, 3)
        ExponentPair(1, 3)
        ExponentPair(-2, 3)

    def test_not_coprime(self):
        with pytest.raises(ValueError):
            ExponentPair(2, 4)

    def test_too_small(self):
        with pytest.raises(ValueError):
            ExponentPair(1, 1)
        with pytest.raises(ValueError):
            ExponentPair(1, -1)


class TestPhiK:
    def test_k_one_is_one(self):
        for t in (0.3 + 0.4j, 2.0 + 0j, 1j, -1.0 + 0j):
            assert phi_k(t, 1) == pytest.approx(1.0)

    def test_t_one(self):
        assert phi_k(1.0 + 0j, 7) == 7.0

    def test_t_minus_one(self):
        assert phi_k(-1.0 + 0j, 4) == -4.0
        assert phi_k(-1.0 + 0j, 5) == 5.0

    def test_t_i_k_three_against_matrix_power(self):
        # oracle: (1,2) entry of [[u, v], [0, 1/u]]^3 computed by repeated
        # multiplication equals v * phi_3(u)
        u, v = 1j, 0.8 - 0.3j
        a = np.array([[u, v], [0, 1 / u]], dtype=complex)
        cubed = a @ a @ a
        assert phi_k(u, 3) == pytest.approx(-1.0)
        assert cubed[0, 1] == pytest.approx(v * phi_k(u, 3), abs=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            phi_k(0j, 3)

    def test_branch_tolerance_configurable(self):
        t = 1.0 + 1e-9
        assert phi_k(t, 5) == 5.0  # within default branch tolerance
        direct = (1 - t**10) / (t**4 * (1 - t * t))
        assert phi_k(t, 5, branch_tol=1e-20) == pytest.approx(direct)


@settings(max_examples=100, derandomize=True, deadline=None)
@given(
    k=st.integers(min_value=0, max_value=10**6),
    m=st.integers(min_value=1, max_value=500),
    e1=st.integers(min_value=-50, max_value=50),
    e2=st.integers(min_value=-50, max_value=50),
)
def test_rou_pow_additivity(k, m, e1, e2):
    a = RootOfUnity(k, m)
    assert rou_pow(a, e1 + e2) == rou_mul(rou_pow(a, e1), rou_pow(a, e2))


@settings(max_examples=100, derandomize=True, deadline=None)
@given(k=st.integers(min_value=0, max_value=10**6), m=st.integers(min_value=1, max_value=500))
def test_snap_round_trip(k, m):
    a = RootOfUnity(k, m)
    assert snap_to_root_of_unity(rou_to_complex(a), a.order, 1e-9) == a


def _snap_oracle(z, max_order, tol):
    """Brute force: scan every reduced angle k/m with m <= max_order."""
    for m in range(1, max_order + 1):
        for k in range(m):
            if math.gcd(k, m) != 1 and not (k == 0 and m == 1):
                continue
            if abs(z - cmath.exp(2j * cmath.pi * k / m)) <= tol:
                return RootOfUnity(k, m)
    return None


def test_snap_matches_brute_force_oracle():
    rng = np.random.default_rng(5)
    for _ in range(300):
        if rng.random() < 0.5:
            m = int(rng.integers(1, 60))
            k = int(rng.integers(0, m))
            z = rou_to_complex(RootOfUnity(k, m)) * (1 + rng.normal() * 1e-12)
        else:
            z = complex(rng.normal(), rng.normal())
        tol = 10.0 ** rng.uniform(-10, -2)
        assert snap_to_root_of_unity(z, 60, tol) == _snap_oracle(z, 60, tol)


@settings(max_examples=100, derandomize=True, deadline=None)
@given(
    angle=st.floats(min_value=0.01, max_value=0.99),
    k=st.integers(min_value=-20, max_value=20),
)
def test_phi_functional_identity(angle, k):
    t = cmath.exp(2j * math.pi * angle)
    if abs(t * t - 1.0) < 1e-4:
        return
    lhs = phi_k(t, k) * t ** (k - 1) * (1.0 - t * t)
    assert abs(lhs - (1.0 - t ** (2 * k))) < 1e-10


@settings(max_examples=100, derandomize=True, deadline=None)
@given(
    angle=st.floats(min_value=0.0, max_value=1.0),
    v_re=st.floats(min_value=-2, max_value=2),
    v_im=st.floats(min_value=-2, max_value=2),
    k=st.integers(min_value=-10, max_value=10),
)
def test_triangular_power_inverse(angle, v_re, v_im, k):
    # A^k built from the phi formula times A^-k built the same way is I
    u = cmath.exp(2j * math.pi * angle)
    v = complex(v_re, v_im)

    def power(e):
        return np.array([[u**e, v * phi_k(u, e)], [0, u**-e]], dtype=complex)

    assert np.max(np.abs(power(k) @ power(-k) - np.eye(2))) < 1e-10
