import pytest

from purebench.errors import ValidationError
from purebench.props import SUITES, Suite, _minimize, run_suite, shrink_qmet_f, suite_names
from purebench.qmet import map_from_list, space

CATALOG = [
    "quantale-laws", "factorization-laws", "purity-composition", "purity-cancellation",
    "pure-implies-barely", "pullback-stable-coincidence", "qmet-equivalence",
    "qmet-qpushout-universal", "cpo-collapse", "dg-proto-equivalence", "dg-split-equivalence",
    "dg-power-equivalence", "dg-counterexample", "injectivity-closure", "orthogonality-closure",
    "pp-elementary-equivalence", "trivial-systems",
]


def _strip(rep):
    data = rep.to_json()
    data.pop("elapsed")
    return data


def test_catalog_is_complete():
    assert sorted(suite_names()) == sorted(CATALOG)
    for s in SUITES.values():
        assert s.claims and s.description


def test_unknown_suite():
    with pytest.raises(ValidationError, match="unknown suite 'nope'"):
        run_suite("nope")


@pytest.mark.parametrize("name", CATALOG)
def test_every_suite_runs_clean_on_a_few_cases(name):
    rep = run_suite(name, seed=3, cases=6)
    assert rep.ok, "\n".join(rep.lines())


@pytest.mark.parametrize("name", ["pure-implies-barely", "qmet-equivalence", "dg-proto-equivalence"])
def test_runs_are_deterministic(name):
    assert _strip(run_suite(name, 11, 9)) == _strip(run_suite(name, 11, 9))


def test_report_lines_mark_failures():
    rep = run_suite("dg-counterexample", 0, 0)
    rep.record("made-up", "a claim that fails", False, {"why": "test"})
    lines = rep.lines()
    assert lines[0].endswith(")") and "FAIL" in lines[0]
    assert any("[FAIL] made-up" in ln for ln in lines)
    assert any("counterexample" in ln for ln in lines)


def test_shrinking_reaches_a_one_point_domain():
    L = space("abcd", [[1, 2, 3], [1, 2], [1]])
    K = space("abc", [[1, 2], [1]])
    f = map_from_list(K, L, ["a", "b", "c"])

    def check(inst):
        return [("nonempty", len(inst["f"].dom.points) == 0, None)]

    suite = Suite("toy", "toy", {"nonempty": "fails on any domain"}, lambda rng, i: {}, check,
                  shrink=shrink_qmet_f)
    small = _minimize(suite, {"f": f}, "nonempty")
    assert len(small["f"].dom.points) == 1
    assert len(small["f"].cod.points) == 1
