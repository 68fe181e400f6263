from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from detineq.combinatorics import Permutation
from detineq.exact import I, InputError
from detineq.generators import rotation_frame, random_doubly_stochastic, rational_unitary
from detineq.majorization import (
    DoublyStochasticMatrix,
    SpectrumVector,
    check_frame,
    check_lemma_pq,
    esym,
    esym_all,
    frame_congruence,
    frame_congruence_diagonal,
    frame_to_ds,
    is_frame,
    is_permutation_ds,
    majorizes,
)
from detineq.matrix import Matrix, permutation_matrix
from oracles import brute_esym

vec = st.lists(st.fractions(min_value=0, max_value=10, max_denominator=6), min_size=1, max_size=6)


@given(vec)
def test_esym_matches_brute_force(x):
    e = esym_all(x)
    assert e == [brute_esym(k, x) for k in range(len(x) + 1)]
    assert esym(0, x) == 1


def test_esym_range():
    with pytest.raises(InputError):
        esym(4, [1, 2, 3])
    assert esym(2, [1, 2, 3]) == 11


def test_majorizes_examples():
    assert majorizes([3, 1], [2, 2])
    assert not majorizes([2, 2], [3, 1])
    assert not majorizes([3, 1], [2, 1])
    with pytest.raises(InputError):
        majorizes([1], [1, 0])


@given(st.integers(1, 6), st.integers(0, 10**6))
def test_doubly_stochastic_image_is_majorized(n, seed):
    S = random_doubly_stochastic(n, seed)
    x = [Fraction(k, 3) for k in range(n)]
    assert majorizes(x, S.left_apply(x))


def test_doubly_stochastic_validation():
    with pytest.raises(InputError):
        DoublyStochasticMatrix(((Fraction(1), Fraction(0)), (Fraction(1), Fraction(0))))
    with pytest.raises(InputError):
        DoublyStochasticMatrix(((Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2))))
    S = DoublyStochasticMatrix.from_permutations(
        [Fraction(1, 4), Fraction(3, 4)], [Permutation.parse("1,2"), Permutation.parse("2,1")])
    assert S.entries == ((Fraction(1, 4), Fraction(3, 4)), (Fraction(3, 4), Fraction(1, 4)))


def test_spectrum_vector():
    lam = SpectrumVector(["3/1", "1/2"])
    assert lam == (Fraction(3), Fraction(1, 2))
    assert SpectrumVector.from_json(lam.to_json()) == lam
    with pytest.raises(InputError):
        SpectrumVector([-1])


def test_frame_checks():
    _, V = rotation_frame(Fraction(4, 5), Fraction(3, 5))
    assert is_frame(V)
    assert not is_permutation_ds(frame_to_ds(V))
    assert V.H @ V != Matrix.identity(3)
    bad = Matrix([[1, 1], [0, 1]])
    with pytest.raises(InputError, match="column 2"):
        check_frame(bad)


def test_frame_congruence_matches_matrix_product():
    V = rational_unitary(4, 11)
    lam = [Fraction(4), Fraction(3), Fraction(1, 2), Fraction(0)]
    B = frame_congruence(lam, V)
    assert B == V.H @ Matrix.diagonal(lam) @ V
    assert [b.real for b in B.diag()] == frame_congruence_diagonal(lam, V)
    assert B.trace() == sum(lam)


def test_lemma_pq_on_permutation_frame_is_equality():
    P = permutation_matrix(Permutation.parse("3,1,2"))
    lam = [Fraction(5), Fraction(3), Fraction(2)]
    rep = check_lemma_pq(lam, P, Fraction(0), Fraction(1))
    assert rep.holds and rep.equality
    assert rep.spectrum_permutation is True
    assert sorted(rep.b_diag) == sorted(lam)


def test_lemma_pq_strict_on_mixing_frame():
    V = Matrix([[Fraction(3, 5), Fraction(4, 5) * I, 0],
                [Fraction(4, 5), Fraction(-3, 5) * I, 0], [0, 0, 1]])
    rep = check_lemma_pq([Fraction(5), Fraction(3), Fraction(2)], V, Fraction(1), Fraction(2))
    assert rep.holds_t and rep.holds_difference
    assert rep.gap_difference > 0
    assert rep.spectrum_permutation is None
    assert rep.to_json()["spectrum_permutation"] == "n/a"


def test_lemma_pq_preconditions():
    V = Matrix.identity(2)
    with pytest.raises(InputError):
        check_lemma_pq([1, 2], V, Fraction(1), Fraction(1))
    with pytest.raises(InputError):
        check_lemma_pq([1, 2], V, Fraction(0), Fraction(2))
