import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from sbmetric import (
    AxiomFamily,
    FiniteSpace,
    InputError,
    SamplerConfig,
    SbMetricSpec,
    Verdict,
    builtin,
    builtin_bmetric,
    check_axioms,
    check_not_b_generated,
    check_quasi_symmetry,
    check_symmetry,
    estimate_min_b,
)
from sbmetric.axioms import min_b_witness, violated
from sbmetric.metrics import catalog


def _small(**kw):
    base = dict(seed=3, lo=-4, hi=4, step=1, random_count=400)
    base.update(kw)
    return SamplerConfig(**base)


def test_ex2_1_fails_as_s_metric():
    rep = check_axioms(AxiomFamily.S_METRIC, builtin("ex2_1"), _small(lo=0, hi=9))
    assert rep.verdict is Verdict.FAIL
    s2 = rep.clause("S2")
    hit = [c for c in s2.counterexamples if c.points == ((4.0,), (6.0,), (8.0,), (5.0,))]
    assert hit and hit[0].lhs == 4 and hit[0].rhs == 2.75


def test_witness_pinned_even_when_cap_is_small():
    # the registered probe must survive a cap of one counterexample
    rep = check_axioms(AxiomFamily.S_METRIC, builtin("ex2_1"), _small(max_counterexamples=1))
    assert "(4,6,8;5)" in rep.to_text()


def test_ex2_1_passes_as_sb_with_b4():
    rep = check_axioms(AxiomFamily.SB_METRIC, builtin("ex2_1"), _small(), b=4)
    assert rep.verdict is Verdict.PASS_SAMPLED
    assert rep.samples_evaluated > 0
    assert rep.counterexamples == []


def test_one_point_space_passes_everything():
    m = SbMetricSpec("zero", lambda x, y, z: 0.0, space=FiniteSpace(("p",)))
    rep = check_axioms(AxiomFamily.SB_METRIC, m, _small())
    assert rep.verdict is Verdict.PASS_SAMPLED
    assert all(c.failures == 0 for c in rep.clauses)


def test_symmetry_ex2_3_fails_at_0_1():
    rep = check_symmetry(builtin("ex2_3"), _small())
    assert rep.verdict is Verdict.FAIL
    vals = {(c.points, c.lhs, c.rhs) for c in rep.counterexamples}
    assert (((0.0,), (1.0,)), 2.0, 4.0) in vals or (((1.0,), (0.0,)), 4.0, 2.0) in vals


def test_symmetry_ex2_2_passes():
    assert check_symmetry(builtin("ex2_2"), _small()).passed


def test_quasi_symmetry():
    assert check_quasi_symmetry(builtin("ex2_3"), _small(lo=0, hi=1), b=2).passed
    assert check_quasi_symmetry(builtin("ex2_1"), _small()).passed
    # at b=1 quasi-symmetry collapses to symmetry, which ex2_3 violates
    assert not check_quasi_symmetry(builtin("ex2_3"), _small(), b=1).passed


def test_min_b_ex2_1_probe():
    assert estimate_min_b(builtin("ex2_1"), _small(random_count=0)) >= 16 / 11 - 1e-9


def test_min_b_ex2_5_at_most_one():
    assert estimate_min_b(builtin("ex2_5"), _small()) <= 1 + 1e-9


def test_min_b_ex2_3_tight_witness():
    value, witness = min_b_witness(builtin("ex2_3"), _small(lo=0, hi=1, random_count=0))
    assert value == 2 and witness == "(1,1,0;1)"


def test_not_b_generated_ex2_6():
    rep = check_not_b_generated(builtin("ex2_6", b=1), _small())
    assert rep.verdict is Verdict.FAIL
    gap = max(c.violation for c in rep.counterexamples)
    assert gap >= 1 - 1e-9


def test_not_b_generated_s1_holds():
    # S_1 is generated by the l1 metric, so no obstruction
    assert check_not_b_generated(builtin("s1"), _small()).passed


def test_b_metric_schema():
    assert check_axioms("B_METRIC", builtin_bmetric("sq"), _small(), b=2).passed
    assert not check_axioms("B_METRIC", builtin_bmetric("sq"), _small(), b=1).passed


def test_g_metric_schema_runs():
    rep = check_axioms(AxiomFamily.G_METRIC, builtin("ex2_5"), _small(lo=-2, hi=2))
    assert {c.name for c in rep.clauses} == {"G1", "G2", "G3", "G4", "G5"}


def test_schema_type_mismatch():
    with pytest.raises(InputError):
        check_axioms(AxiomFamily.B_METRIC, builtin("ex2_1"), _small())
    with pytest.raises(InputError):
        check_axioms(AxiomFamily.S_METRIC, builtin_bmetric("abs"), _small())


def test_report_text_is_line_oriented():
    text = check_axioms(AxiomFamily.S_METRIC, builtin("ex2_1"), _small()).to_text()
    lines = text.splitlines()
    assert lines[0].startswith("report ")
    assert any(ln.startswith("clause name=S2 verdict=FAIL") for ln in lines)
    assert any("tuple=(4,6,8;5) lhs=4 rel=le rhs=2.75" in ln for ln in lines)


def test_determinism_same_seed():
    cfg = _small(seed=11)
    a = check_axioms(AxiomFamily.S_METRIC, builtin("ex2_1"), cfg).to_text()
    b = check_axioms(AxiomFamily.S_METRIC, builtin("ex2_1"), cfg).to_text()
    assert a == b


def test_different_seed_changes_random_part():
    m = builtin("ex2_1")
    a = check_axioms(AxiomFamily.S_METRIC, m, _small(seed=1, lo=0, hi=1, random_count=50))
    b = check_axioms(AxiomFamily.S_METRIC, m, _small(seed=2, lo=0, hi=1, random_count=50))
    assert a.samples_evaluated == b.samples_evaluated
    assert a.empirical_b_lower != b.empirical_b_lower


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2**32), st.sampled_from(["ex2_1", "ex2_3", "ex2_6", "ex2_2"]))
def test_fail_is_sound(seed, name):
    m = builtin(name)
    cfg = _small(seed=seed, random_count=150)
    rep = check_axioms(AxiomFamily.S_METRIC, m, cfg)
    for cx in rep.counterexamples:
        assert cx.violates(cfg.slack)
        pts = cx.points
        if cx.clause == "S2":
            x, y, z, a = pts
            s = m.distance
            lhs, rhs = s(x, y, z), s(x, x, a) + s(y, y, a) + s(z, z, a)
            assert lhs == cx.lhs and rhs == cx.rhs
            assert violated("<=", lhs, rhs, cfg.slack)
    if rep.verdict is Verdict.FAIL:
        assert rep.counterexamples


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32))
def test_min_b_below_claim_for_catalog(seed):
    cfg = _small(seed=seed, random_count=200)
    for m in catalog():
        if isinstance(m, SbMetricSpec):
            assert estimate_min_b(m, cfg) <= m.b + cfg.slack


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**16), st.floats(0.01, 100))
def test_min_b_scale_invariant(seed, c):
    m = builtin("ex2_5")
    scaled = SbMetricSpec("scaled", lambda x, y, z: c * m.distance(x, y, z), b=m.b)
    cfg = _small(seed=seed, random_count=100)
    assert estimate_min_b(scaled, cfg) == pytest.approx(estimate_min_b(m, cfg), rel=1e-9, abs=1e-12)


def test_s_metric_with_b1_is_symmetric():
    cfg = _small(random_count=200)
    for m in catalog():
        if isinstance(m, SbMetricSpec) and m.b == 1:
            if check_axioms(AxiomFamily.S_METRIC, m, cfg).passed:
                assert check_symmetry(m, cfg).passed, m.name
