"""Small runs of the shared campaigns, plus negative controls."""
import pytest

from fmlog import verify
from fmlog.fm import points


def test_fm_campaign_small():
    for D in (1, 2, 3, 4):
        r = verify.fm_axioms(D, 4, 30, seed=3)
        assert r["passed"], r["failures"]
        assert r["checked"] >= 90


def test_coordinate_law_small():
    r = verify.fm_coordinate_law(2, 5, 30, seed=3)
    assert r["passed"] and r["checked"] == 60


def test_framed_campaign_small():
    r = verify.framed_suite(30, seed=3)
    assert r["passed"] and r["checked"] == 2 * 30 * 4


def test_screen_and_bridge_small():
    assert verify.screen_suite(40, seed=3)["passed"]
    assert verify.bridge_suite(20, seed=3)["passed"]


def test_strata_suite_counts():
    r = verify.strata_suite(5)
    assert r["passed"]
    assert r["counts"] == {"1": 1, "2": 1, "3": 4, "4": 26, "5": 236}


def test_same_seed_same_report():
    assert verify.fm_axioms(2, 3, 20, seed=9) == verify.fm_axioms(2, 3, 20, seed=9)
    assert verify.screen_suite(20, seed=9) == verify.screen_suite(20, seed=9)


def test_broken_grafting_fails_associativity(monkeypatch):
    """Dropping the factor configurations must make the campaign fail."""
    real = points.compose

    def lossy(q, x, ys):
        out = real(q, x, ys)
        # forget which way each non-root cluster points by reversing it
        config = {
            v: ({c: tuple(-a for a in p) for c, p in kids.items()} if v != out.leaves else kids)
            for v, kids in out.config.items()
        }
        return points.FMPoint(out.D, out.tree, config, check=False)

    monkeypatch.setattr(verify, "compose", lossy)
    r = verify.fm_axioms(2, 4, 40, seed=1)
    assert not r["passed"]


def test_broken_g_map_fails_coordinate_law(monkeypatch):
    from fmlog.fm.directions import direction_canonical

    def wrong(q, w):
        wd = w.as_dict()
        return direction_canonical({i: tuple(-c for c in wd[j]) for i, j in q.items()})

    monkeypatch.setattr(verify, "g_map", wrong)
    assert not verify.fm_coordinate_law(2, 4, 40, seed=1)["passed"]
