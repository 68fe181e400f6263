from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from detineq.combinatorics import Permutation
from detineq.exact import InputError
from detineq.generators import (
    FAMILIES,
    PYTHAGOREAN,
    GeneratorSpec,
    SplitMix64,
    block_pd,
    derive_seed,
    diagonal_psd,
    generate,
    gram_psd,
    rotation_frame,
    pad_frame,
    random_derangement,
    random_doubly_stochastic,
    random_frame,
    random_hermitian,
    random_pd,
    random_spectrum,
    rank_one_orbit_family,
    sqrt_block_frame,
    rational_unitary,
    structured_pd,
)
from detineq.inequalities import is_pd, is_psd
from detineq.majorization import is_frame
from detineq.matrix import Matrix, is_block_diagonal, rank

seeds = st.integers(0, 2**63)


def test_splitmix64_reference_vectors():
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_derive_seed_is_frozen():
    assert derive_seed(0) == 9523843951405948789
    assert derive_seed(1, 5) == 7720868727474230139
    assert derive_seed(1, 5) != derive_seed(1, 6)


def test_frozen_instance():
    assert gram_psd(2, 2, 42).to_json()["data"] == [
        ["109/64", "3/8-51/64i"], ["3/8+51/64i", "53/64"]]


def test_rng_helpers_stay_in_range():
    rng = SplitMix64(3)
    for _ in range(200):
        assert 0 <= rng.below(7) < 7
        assert -2 <= rng.randint(-2, 2) <= 2
        r = rng.rational(8)
        assert r.denominator in (1, 2, 4, 8) and -1 <= r <= 1
    assert sorted(rng.shuffle(list(range(9)))) == list(range(9))
    with pytest.raises(ValueError):
        rng.below(0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), seeds)
def test_rational_unitary_is_exactly_unitary(n, seed):
    U = rational_unitary(n, seed)
    assert U.H @ U == Matrix.identity(n)
    assert U @ U.H == Matrix.identity(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), seeds, st.data())
def test_gram_psd_rank_and_class(n, seed, data):
    r = data.draw(st.integers(1, n))
    A = gram_psd(n, r, seed)
    assert is_psd(A)
    assert rank(A) == r


def test_gram_psd_rejects_bad_rank():
    with pytest.raises(InputError):
        gram_psd(3, 0, 1)
    with pytest.raises(InputError):
        gram_psd(3, 4, 1)


def test_pd_and_structured_pd():
    for seed in range(10):
        assert is_pd(random_pd(4, seed))
        assert is_pd(structured_pd(5, seed))
        assert diagonal_psd(4, seed).is_diagonal()


def test_random_hermitian():
    A = random_hermitian(5, 1)
    assert A.is_hermitian


def test_rotation_frame_not_unitary():
    for c, s in PYTHAGOREAN:
        lam, V = rotation_frame(c, s)
        assert is_frame(V)
        assert list(lam) == [1, 1, 1]
        if c != s and c * s != 0:
            assert V.H @ V != V @ V.H
    with pytest.raises(InputError):
        rotation_frame(Fraction(1, 2), Fraction(1, 2))


def test_pad_frame_padding():
    lam, V = pad_frame(*rotation_frame(Fraction(3, 5), Fraction(4, 5)))
    assert list(lam) == [1, 1, 1, 0]
    assert V.n == 4 and V[3, 3] == 1 and is_frame(V)


def test_sqrt_block_frame_has_unit_gram_diagonal():
    V = sqrt_block_frame([(Fraction(4, 5), Fraction(3, 5)), None],
                                Permutation.parse("3,1,2"))
    G = V.H @ V
    assert all(x == 1 for x in G.diag())
    assert G != Matrix.identity(3)
    assert is_frame(V)
    with pytest.raises(InputError):
        sqrt_block_frame([(Fraction(3, 5), Fraction(4, 5))])


def test_random_frames_are_frames():
    for n in range(1, 7):
        for seed in range(8):
            assert is_frame(random_frame(n, seed))


def test_rank_one_orbit_family_structure():
    tau = Permutation.parse("2,1,4,5,3")
    A = rank_one_orbit_family(tau, 4)
    assert is_psd(A)
    assert rank(A) == 2
    with pytest.raises(InputError):
        rank_one_orbit_family(Permutation.parse("1,3,2"), 0)


def test_block_pd_modes():
    A, part = block_pd([2, 2], 7)
    assert is_pd(A) and part.sizes == (2, 2)
    B, part = block_pd([1, 2, 3], 7, block_diagonal=True)
    assert is_pd(B) and is_block_diagonal(B, part)


def test_spectrum_and_doubly_stochastic():
    lam = random_spectrum(6, 3, distinct=True, positive=True)
    assert len(set(lam)) == 6 and min(lam) > 0
    S = random_doubly_stochastic(5, 2)
    assert all(sum(r) == 1 for r in S.entries)


def test_random_derangement():
    rng = SplitMix64(5)
    for n in range(2, 8):
        assert random_derangement(n, rng).is_derangement()
    with pytest.raises(InputError):
        random_derangement(1, rng)


@pytest.mark.parametrize("family", FAMILIES)
def test_generate_is_deterministic(family):
    params = {"sizes": [2, 1]} if family == "blockPD" else {}
    a = generate(GeneratorSpec(family, 4, 99, params))
    b = generate(GeneratorSpec(family.upper(), 4, 99, params))
    assert a["matrix"] == b["matrix"]
    assert a.get("lambda") == b.get("lambda")


def test_generator_spec_validation():
    with pytest.raises(InputError):
        GeneratorSpec("nope", 3, 0)
    with pytest.raises(InputError):
        GeneratorSpec("psd", 0, 0)
