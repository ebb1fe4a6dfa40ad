"""Oval forests: realizability, cabling, splice diagrams, linking.

The linking checks use an independent oracle.  When one oval contains
another, the inner boundary curve is homologous to (its winding) times
the fiber of the solid torus it lives in, and the outer curve links that
fiber exactly once, so lk = winding of the inner oval.  Ovals in
disjoint subtrees never link: their curves sit over disjoint disks and
separate.
"""

import random

import pytest

from cbound.splice import (
    CableOp,
    Oval,
    OvalError,
    OvalForest,
    cabling_program,
    induced_windings,
    linking_from_splice,
    random_realizable_forest,
    realizable,
    render_splice,
    simplify_splice,
    splice_diagram,
)

WERMER = [Oval(1, 0, 1), Oval(2, 1, 1), Oval(3, 2, 1)]


def ancestry_lk(forest: OvalForest):
    """Closed-form linking matrix straight from the nesting combinatorics."""
    ovals = {o.ident: o for o in forest.ovals}
    ids = forest.ids()

    def ancestors(i):
        out = [i]
        while ovals[out[-1]].parent != 0:
            out.append(ovals[out[-1]].parent)
        return out

    def lk(i, j):
        if j in ancestors(i):
            return ovals[i].winding
        if i in ancestors(j):
            return ovals[j].winding
        return 0

    n = len(ids)
    return [[0 if a == b else lk(ids[a], ids[b]) for b in range(n)]
            for a in range(n)]


def splice_lk(forest):
    labels, m = linking_from_splice(simplify_splice(splice_diagram(forest)))
    assert labels == forest.ids()
    return m


def test_wermer_chain_realizable():
    ok, bad = realizable(OvalForest(WERMER))
    assert ok and bad == []


def test_bare_nested_pair_is_not_realizable():
    # an innermost oval at odd depth has nothing to balance its winding
    ok, bad = realizable(OvalForest([Oval(1, 0, 1), Oval(2, 1, 1)]))
    assert not ok
    assert bad == [2]


def test_unbalanced_chain_blames_the_middle_oval():
    ok, bad = realizable(OvalForest([Oval(1, 0, 2), Oval(2, 1, 1), Oval(3, 2, 3)]))
    assert not ok and bad == [2]


def test_top_level_ovals_are_unconstrained():
    for w1, w2 in [(1, 1), (3, -2), (-3, 0)]:
        ok, _ = realizable(OvalForest([Oval(1, 0, w1), Oval(2, 0, w2)]))
        assert ok


def test_fibers_skip_the_balance_rule():
    # a fiber at odd depth needs no children of its own
    ok, bad = realizable(OvalForest([Oval(1, 0, 3), Oval(2, 1, 1, fiber=True)]))
    assert ok, bad
    f = OvalForest([Oval(1, 0, 2), Oval(2, 1, 1, fiber=True), Oval(3, 1, 2), Oval(4, 3, 2)])
    ok, bad = realizable(f)
    assert ok, bad


def test_induced_windings_flip_at_odd_depth():
    w = induced_windings(OvalForest(WERMER))
    assert w == {1: 1, 2: -1, 3: 1}


def test_cabling_program_ops():
    prog = cabling_program(OvalForest(WERMER))
    assert [str(op) for op in prog] == [
        "add_retain(+1) @1", "add_retain(+1) @2", "add_remove(+1) @3"]
    assert all(isinstance(op, CableOp) for op in prog)


def test_splice_render_is_stable():
    sd = simplify_splice(splice_diagram(OvalForest(WERMER)))
    text = render_splice(sd)
    assert text.count(">") == 3  # one arrowhead per component
    assert render_splice(simplify_splice(splice_diagram(OvalForest(WERMER)))) == text


def test_wermer_linking():
    assert splice_lk(OvalForest(WERMER)) == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_disjoint_subtrees_do_not_link():
    f = OvalForest([Oval(1, 0, 1), Oval(2, 1, 2), Oval(3, 1, -1),
                    Oval(4, 2, 2), Oval(5, 3, -1)])
    m = splice_lk(f)
    assert m == ancestry_lk(f)
    assert m[1][2] == 0 and m[3][4] == 0 and m[1][4] == 0


def test_deep_chain_linking_is_inner_winding():
    f = OvalForest([Oval(1, 0, 2), Oval(2, 1, 1), Oval(3, 2, 1),
                    Oval(4, 3, -2), Oval(5, 4, -2)])
    m = splice_lk(f)
    assert m == ancestry_lk(f)
    assert m[1][4] == -2          # = winding of oval 5
    assert m[0][1] == 1           # = winding of oval 2


def test_zero_winding_middle_oval():
    # a middle oval balanced to zero by its children links nothing above it,
    # but the children still link every ancestor with their own windings
    f = OvalForest([Oval(1, 0, 1), Oval(2, 1, 0), Oval(3, 2, 2), Oval(4, 2, -2)])
    m = splice_lk(f)
    assert m == ancestry_lk(f)
    assert m[0][1] == 0 and m[0][2] == 2 and m[0][3] == -2


def test_fiber_winding_enters_directly():
    f = OvalForest([Oval(1, 0, 3), Oval(2, 1, -1, fiber=True)])
    assert splice_lk(f) == [[0, -1], [-1, 0]]


@pytest.mark.parametrize("seed", range(40))
def test_random_forests_match_ancestry_oracle(seed):
    rng = random.Random(seed)
    f = random_realizable_forest(rng, max_ovals=6)
    ok, bad = realizable(f)
    assert ok, bad
    assert splice_lk(f) == ancestry_lk(f)


def test_generator_covers_wide_windings():
    rng = random.Random(0)
    seen = set()
    for _ in range(300):
        f = random_realizable_forest(rng)
        seen.update(o.winding for o in f.ovals if not o.fiber and f.depth(o.ident) % 2 == 0)
    assert {-3, 3} <= seen


def test_duplicate_idents_rejected():
    with pytest.raises(OvalError):
        OvalForest([Oval(1, 0, 1), Oval(1, 0, 2)])
