"""Braid word operations, closure invariants, and the chi search."""

import random

import pytest

from cbound.braids import (
    BraidError,
    BraidWord,
    QPFactorization,
    bennequin_chi,
    braid_equal,
    chi_minus_lower_bound,
    component_count,
    concat,
    connected_sum_word,
    destabilize_isolated,
    determinant_of_closure,
    expand_qp,
    mirror,
    murasugi_chi_upper,
    perm_cycles,
    perm_of,
    qp_chi,
    reduce_word,
    reverse,
    seifert_matrix_of_closure,
    signature_and_nullity,
    split_sum_word,
    sub_braid,
)

TREFOIL = BraidWord(2, (1, 1, 1))
FIG8 = BraidWord(3, (-1, 2, -1, 2))
HOPF = BraidWord(2, (1, 1))


def test_word_validation():
    with pytest.raises(BraidError):
        BraidWord(2, (2,))
    with pytest.raises(BraidError):
        BraidWord(3, (0,))
    with pytest.raises(BraidError):
        BraidWord(0, ())


def test_component_count():
    assert component_count(TREFOIL) == 1
    assert component_count(HOPF) == 2
    assert component_count(BraidWord(3, ())) == 3
    assert component_count(BraidWord(3, (1, -2, 1, -2, 1))) == 2


def test_perm_cycles_indices_are_zero_based():
    cycles = perm_cycles(perm_of(BraidWord(3, (1,))))
    assert sorted(map(sorted, cycles)) == [[0, 1], [2]]


def test_reduce_word_cancels_free_pairs():
    b = BraidWord(3, (1, -2, 2, -1, 1))
    assert reduce_word(b).letters == (1,)
    assert reduce_word(BraidWord(2, (1, -1))).letters == ()


def test_destabilize_isolated():
    # sigma_2 appears exactly once: Markov destabilization drops a strand
    b = BraidWord(3, (1, 1, 2))
    d = destabilize_isolated(b)
    assert d is not None
    assert d.strands == 2 and d.letters == (1, 1)
    assert destabilize_isolated(TREFOIL) is None


def test_braid_equal_relations():
    assert braid_equal(BraidWord(3, (1, 2, 1)), BraidWord(3, (2, 1, 2)))
    assert braid_equal(BraidWord(3, (1, 3 - 2)), BraidWord(3, (1, 1, -1, 1)))  # far commutation + cancel
    assert not braid_equal(TREFOIL, BraidWord(2, (1,)))


def test_mirror_and_reverse():
    assert mirror(TREFOIL).letters == (-1, -1, -1)
    assert reverse(BraidWord(3, (1, 2))).letters == (2, 1)
    assert mirror(mirror(FIG8)) == FIG8


def test_sum_words():
    s = split_sum_word(HOPF, TREFOIL)
    assert s.strands == 4
    assert component_count(s) == 3
    c = connected_sum_word(HOPF, TREFOIL)
    assert c.strands == 3
    assert component_count(c) == 2
    assert concat(TREFOIL, TREFOIL).letters == (1,) * 6


def test_sub_braid_strand_sets_are_one_based():
    # keep the 2-component sublink of 2_1 u 2_1 living on strands {1,2}
    b = BraidWord(4, (1, 1, 3, 3))
    assert sub_braid(b, {1, 2}) == BraidWord(2, (1, 1))
    assert sub_braid(b, {3, 4}) == BraidWord(2, (1, 1))
    assert sub_braid(b, {1, 3}).letters == ()


def test_bennequin_chi():
    # strands minus letters: trefoil gives -1, hopf 0
    assert bennequin_chi(TREFOIL) == -1
    assert bennequin_chi(HOPF) == 0
    assert bennequin_chi(BraidWord(3, (1, 1, 1, 2, 2))) == -2


def test_qp_expansion_and_chi():
    fac = QPFactorization(3, (((), 1), ((), 1), ((1,), 2)))
    w = expand_qp(fac)
    assert w.strands == 3
    # each factor contributes one band: chi = strands - factors
    assert qp_chi(fac) == 0
    # the expanded word also carries the conjugating letters, so its
    # banded surface can only do worse
    assert bennequin_chi(w) <= qp_chi(fac)


def test_signature_and_nullity():
    assert signature_and_nullity(TREFOIL) == (-2, 0)
    assert signature_and_nullity(mirror(TREFOIL)) == (2, 0)
    assert signature_and_nullity(FIG8) == (0, 0)
    # split 2-component unlink has nullity 1
    assert signature_and_nullity(BraidWord(2, ()))[1] == 1


def test_determinants():
    assert determinant_of_closure(TREFOIL) == 3
    assert determinant_of_closure(FIG8) == 5
    assert determinant_of_closure(BraidWord(2, (1, 1, 1, 1, 1))) == 5
    # split links have vanishing determinant
    assert determinant_of_closure(BraidWord(3, (1, 1))) == 0


def test_seifert_matrix_size():
    m = seifert_matrix_of_closure(TREFOIL)
    assert len(m) == 2 and len(m[0]) == 2


def test_murasugi_upper_bound():
    assert murasugi_chi_upper(mirror(TREFOIL)) <= -1
    assert murasugi_chi_upper(BraidWord(2, (-1, -1))) <= 0


def test_chi_search_worked_example():
    r = chi_minus_lower_bound(BraidWord(3, (1, -2, -1, -1, -2)), 100000)
    assert r.score >= 2
    assert not r.truncated
    moves = [step[0] for step in r.witness]
    assert moves[0] == "flip"
    assert moves[1] == "reduce"
    assert r.witness[1][1].letters == (1, -2, -2)


def test_chi_search_respects_budget():
    r = chi_minus_lower_bound(BraidWord(3, (1, -2, -1, -1, -2)), 3)
    assert r.truncated
    assert r.explored <= 3


def test_chi_search_on_positive_words():
    # positive words can never reach more disks than components
    r = chi_minus_lower_bound(TREFOIL, 5000)
    assert r.score <= component_count(TREFOIL)


@pytest.mark.parametrize("seed", range(4))
def test_reduce_preserves_permutation(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    word = tuple(rng.choice([i, -i]) for i in
                 (rng.randint(1, n - 1) for _ in range(8)))
    b = BraidWord(n, word)
    assert perm_of(reduce_word(b)) == perm_of(b)
