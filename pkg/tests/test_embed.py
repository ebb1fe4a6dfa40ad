"""Numeric oracle: parametrized curves over nested disks, projected and read
back as diagrams."""

import random

import pytest

from cbound.diagrams import linking_matrix
from cbound.embed import (
    EmbedError,
    auto_geometry,
    check_geometry,
    oval_link_lk,
    oval_link_pd,
    parametrize,
    render_svg,
)
from cbound.homfly import homfly
from cbound.notation import parse_ovals
from cbound.splice import Oval, OvalError, OvalForest

HOPF_TEXT = "1 0 1 0 0 0.6\n2 1 1 0 0 0\n"


def test_hopf_fixture(fixtures_dir):
    f = parse_ovals((fixtures_dir / "hopf.ovals").read_text())
    ids, m = oval_link_lk(f)
    assert ids == [1, 2]
    assert m == [[0, 1], [1, 0]]


def test_pd_and_lk_paths_agree():
    f = parse_ovals(HOPF_TEXT)
    diag, ids = oval_link_pd(f)
    assert ids == [1, 2]
    assert linking_matrix(diag) == [[0, 1], [1, 0]]


def test_auto_geometry_fills_circles():
    f = OvalForest([Oval(1, 0, 1), Oval(2, 1, 1), Oval(3, 2, 1)])
    g = auto_geometry(f)
    check_geometry(g)
    by_id = {o.ident: o for o in g.ovals}
    # children sit strictly inside their parents
    assert by_id[2].r < by_id[1].r
    assert by_id[3].r < by_id[2].r


def test_check_geometry_rejects_overlap():
    f = OvalForest([Oval(1, 0, 1, cx=0.0, cy=0.0, r=0.5),
                    Oval(2, 0, 1, cx=0.4, cy=0.0, r=0.5)])
    with pytest.raises(OvalError, match="overlap"):
        check_geometry(f)


def test_check_geometry_rejects_child_outside_parent():
    f = OvalForest([Oval(1, 0, 1, cx=0.0, cy=0.0, r=0.3),
                    Oval(2, 1, 1, cx=0.9, cy=0.0, r=0.05)])
    with pytest.raises(OvalError, match="leaves its parent"):
        check_geometry(f)


def test_parametrize_sample_counts_scale():
    f = parse_ovals(HOPF_TEXT)
    base = parametrize(f)
    fine = parametrize(f, samples_scale=2)
    assert len(base) == len(fine) == 2
    for (_, a), (_, b) in zip(base, fine):
        assert len(b) > len(a)


def test_projection_stable_across_seeds():
    f = parse_ovals(HOPF_TEXT)
    mats = {tuple(map(tuple, oval_link_lk(f, seed=s)[1])) for s in range(4)}
    assert len(mats) == 1


def test_orientation_flag_negates_odd_depth():
    # the induced orientation reverses curves at odd depth, which flips
    # the sign of their linking with everything else
    f = parse_ovals(HOPF_TEXT)
    _, ccw = oval_link_lk(f, orientation="ccw")
    _, ind = oval_link_lk(f, orientation="induced")
    assert ind == [[0, -ccw[0][1]], [-ccw[1][0], 0]]


def test_wermer_embedding_homfly_matches_diagram(fixtures_dir):
    from cbound.braids import BraidWord
    from cbound.homfly import homfly_braid

    f = parse_ovals((fixtures_dir / "wermer.ovals").read_text())
    diag, _ = oval_link_pd(f)
    # same 3-component value both ways through completely different code
    assert homfly(diag) == homfly_braid(BraidWord(3, (1, 2, 1, 1, 2, 1)))


def test_svg_render_smoke():
    svg = render_svg(parse_ovals(HOPF_TEXT))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert "<polygon" in svg and "<title>1</title>" in svg


def test_bad_orientation_rejected():
    with pytest.raises((EmbedError, ValueError)):
        oval_link_lk(parse_ovals(HOPF_TEXT), orientation="cw")


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_forest_embeds_cleanly(seed):
    rng = random.Random(100 + seed)
    from cbound.splice import random_realizable_forest

    f = random_realizable_forest(rng, max_ovals=5)
    ids, m = oval_link_lk(f, seed=seed)
    assert ids == f.ids()
    assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))
