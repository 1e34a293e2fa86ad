"""The ten acceptance criteria, each at its stated size and tolerance.

Each test records a one-line PASS/FAIL summary that the terminal summary
hook in ``conftest.py`` prints at the end of the run.
"""
import time
from fractions import Fraction

import pytest

from purebench.props import _curated_inclusion, run_suite, suspension_instance
from purebench.dgab import is_E_injective_dg, is_ordinarily_injective_dg, shift
from purebench.oracles import brute_pure_qmet
from purebench.purity import is_E_pure, weakly_pure_at
from purebench.qmet import QMET

SEED = 7
RESULTS: list[str] = []


def _record(label: str, ok: bool, elapsed: float, note: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {label}  ({elapsed:.1f}s){'  ' + note if note else ''}"
    RESULTS.append(line)
    print(line)


def _suite(name: str, cases: int):
    rep = run_suite(name, SEED, cases)
    assert not rep.errors, rep.errors
    return rep


def _counts(rep, prefix: str) -> dict:
    return {n: (a.passed, a.failed) for n, a in rep.assertions.items() if n.startswith(prefix)}


def _assert_clean(rep):
    bad = {n: a.counterexample for n, a in rep.assertions.items() if not a.ok}
    assert not bad, "\n".join(rep.lines())


def test_criterion_01_quantale_laws():
    t = time.perf_counter()
    rep = _suite("quantale-laws", 100)
    elapsed = time.perf_counter() - t
    ok = rep.ok and elapsed < 60
    _record("1 quantale laws: validation == oracle, well-above == subsets", ok, elapsed)
    _assert_clean(rep)
    # the shipped tables plus 100 random ones were all examined
    assert rep.assertions["validation-matches-oracle"].passed >= 100
    assert elapsed < 60


def test_criterion_02_factorization_soundness():
    t = time.perf_counter()
    rep = _suite("factorization-laws", 200)
    elapsed = time.perf_counter() - t
    _record("2 factorization: recomposition, classes, unique fill-ins", rep.ok and elapsed < 120, elapsed)
    _assert_clean(rep)
    recomposed = sum(p for p, _ in _counts(rep, "recomposes").values())
    fills = sum(p for p, _ in _counts(rep, "unique-fill").values())
    assert recomposed >= 200 and fills >= 200
    assert elapsed < 120


def test_criterion_03_pure_implies_barely():
    t = time.perf_counter()
    # round-robin over three bases: 600 cases give 200 pairs per base
    a = _suite("pure-implies-barely", 600)
    b = _suite("pullback-stable-coincidence", 600)
    elapsed = time.perf_counter() - t
    _record("3 pure => barely; pure <=> barely under pullback-stable E", a.ok and b.ok, elapsed)
    _assert_clean(a)
    _assert_clean(b)
    for sysname in ("surjective-isometry", "regepi-mono"):
        res = b.assertions[f"pure-iff-barely[{sysname}]"]
        assert res.failed == 0 and res.passed >= 200


def test_criterion_04_three_way_equivalence():
    t = time.perf_counter()
    rep = _suite("qmet-equivalence", 200)
    f = _curated_inclusion()
    not_pure = not is_E_pure(QMET, "surjective-isometry", f, f) and not brute_pure_qmet(f, f)[0]
    elapsed = time.perf_counter() - t
    ok = rep.ok and not_pure
    _record("4 three-way agreement over q-pushout-closed families; curated map not pure", ok, elapsed,
            "curated weak-at-1/2 claim: see the strict xfail below")
    _assert_clean(rep)
    assert rep.assertions["three-way-agree"].passed >= 200
    assert not_pure


@pytest.mark.xfail(strict=True, reason=(
    "the only nonexpanding maps from the 3-point line onto its end points are constant, "
    "so every lift is at distance 2 from the identity, above the bound 2q = 1"))
def test_criterion_04_curated_weak_at_half():
    f = _curated_inclusion()
    v = weakly_pure_at(f, f, Fraction(1, 2))
    RESULTS.append(f"{'PASS' if v else 'FAIL'}  4b curated inclusion weakly pure at 1/2 (expected to fail; recorded)")
    assert v


def test_criterion_05_q_pushout_universal():
    t = time.perf_counter()
    rep = _suite("qmet-qpushout-universal", 200)
    elapsed = time.perf_counter() - t
    _record("5 q-pushouts: unique mediators; q = 0 equals the pushout oracle", rep.ok, elapsed)
    _assert_clean(rep)
    assert rep.assertions["unique-mediator"].passed >= 200
    assert rep.assertions["q0-matches-pushout-oracle"].passed > 0


def test_criterion_06_cpo_collapse():
    t = time.perf_counter()
    rep = _suite("cpo-collapse", 200)
    elapsed = time.perf_counter() - t
    _record("6 poset purity flavours agree; dense/embedding validates", rep.ok, elapsed)
    _assert_clean(rep)
    assert rep.assertions["flavors-agree"].passed >= 200
    assert rep.assertions["dense-embedding-factorization"].passed >= 200


def test_criterion_07_protomorphism_characterization():
    t = time.perf_counter()
    reps = [_suite(n, 200) for n in ("dg-proto-equivalence", "dg-split-equivalence", "dg-power-equivalence")]
    elapsed = time.perf_counter() - t
    _record("7 graded-square route == comparison route; split routes agree; power check",
            all(r.ok for r in reps), elapsed)
    for r in reps:
        _assert_clean(r)
    assert reps[0].assertions["proto-route-equals-definition"].passed >= 200
    assert reps[1].assertions["split-routes-agree"].passed >= 200
    assert reps[2].assertions["powers-characterize-E-purity"].passed >= 200


def test_criterion_08_suspension_regression():
    t = time.perf_counter()
    B, h = suspension_instance()
    verdicts = (is_ordinarily_injective_dg(B, h), is_ordinarily_injective_dg(shift(B, -1), h),
                is_E_injective_dg(B, h))
    again = (is_ordinarily_injective_dg(B, h), is_ordinarily_injective_dg(shift(B, -1), h),
             is_E_injective_dg(B, h))
    rep = _suite("dg-counterexample", 1)
    elapsed = time.perf_counter() - t
    ok = verdicts == (True, False, False) and again == verdicts and rep.ok
    _record("8 injectivity not closed under suspension (True, False, False)", ok, elapsed)
    assert verdicts == (True, False, False)
    assert again == verdicts
    _assert_clean(rep)


def test_criterion_09_elementary_equivalence():
    t = time.perf_counter()
    rep = _suite("pp-elementary-equivalence", 600)
    elapsed = time.perf_counter() - t
    _record("9 elementary for the lifting formula <=> pure, per base", rep.ok, elapsed)
    _assert_clean(rep)
    per_base = {
        "qmet": rep.assertions["elementary-iff-pure[all-iso]"].passed,
        "omega-cpo": rep.assertions["elementary-iff-pure[dense-embedding]"].passed,
        "dg-fin": rep.assertions["elementary-iff-pure[regepi-mono]"].passed,
    }
    assert per_base["omega-cpo"] >= 200 and per_base["dg-fin"] >= 200, per_base
    assert per_base["qmet"] >= 200


def test_criterion_10_closure():
    t = time.perf_counter()
    inj = _suite("injectivity-closure", 600)
    orth = _suite("orthogonality-closure", 200)
    elapsed = time.perf_counter() - t
    _record("10 injectivity and orthogonality pass to pure subobjects", inj.ok and orth.ok, elapsed)
    _assert_clean(inj)
    _assert_clean(orth)
    assert sum(a.passed for a in inj.assertions.values()) > 0
    assert sum(a.passed for a in orth.assertions.values()) > 0
