import io
from pathlib import Path

import pytest

from abducer.calculus import is_tautology
from abducer.implicates import entails_ground, extract, minimize, render_all
from abducer.ordering import Ordering
from abducer.parser import parse
from abducer.saturation import (
    AllOf,
    EntailsOneOf,
    Limits,
    MaxLiterals,
    Mode,
    NegativeOnly,
    PFilter,
    PositiveOnly,
    SaturationConfig,
    Status,
    combine_pipeline,
    parse_filter,
    saturate,
)

from conftest import World

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def load(name: str):
    p = parse((PROBLEMS / f"{name}.abd").read_text())
    return p, Ordering(p.ordering_config())


def run(name: str, mode: Mode = Mode.SA, pfilter: PFilter = None, **limits):
    p, o = load(name)
    cfg = SaturationConfig(mode, pfilter or PFilter(), Limits(**limits))
    return saturate(p.clauses, o, p.abducibles, p.predicates, cfg), p, o


def constraints_of_empty(res):
    return {str(c.constraint) for c in res.clauses if c.is_empty}


def test_composition():
    res, _, _ = run("composition")
    assert res.status is Status.SATURATED
    assert "{a = b, b != c}" in constraints_of_empty(res)


def test_assertion_example():
    res, _, _ = run("assertion")
    assert res.status is Status.SATURATED
    w = World("a b c")
    assert w.aset("a = b; c != a") in {c.constraint for c in res.clauses if c.is_empty}


def test_empty_input():
    w = World("a b")
    res = saturate([], w.ordering, w.abducibles)
    assert res.status is Status.SATURATED and res.clauses == []


def test_pipeline_reduces_flat_clause():
    w = World("a b c d")
    first = saturate([w.lits("a = b | c = d")], w.ordering, w.abducibles, config=SaturationConfig(Mode.SAR))
    assert constraints_of_empty(first) == {"{a != b, c != d}"}
    res = combine_pipeline([w.lits("a = b | c = d")], w.ordering, w.abducibles)
    assert res.implicates == [w.clause("a = b | c = d")]


def test_restricted_mode_misses_what_full_mode_finds():
    sar, _, _ = run("restricted", Mode.SAR)
    sa, _, _ = run("restricted", Mode.SA)
    # the implicate of [] | {b = d}
    target = World("a b c d").clause("b != d")
    assert not any(entails_ground(c, target) for c in extract(sar.clauses))
    assert any(entails_ground(c, target) for c in extract(sa.clauses))


def test_saturated_input_without_flat_consequences():
    w = World("a b", functions={"f": 1, "g": 1, "k": 0})
    res = combine_pipeline([w.lits("f(k) = g(k)")], w.ordering, w.abducibles)
    assert res.implicates == [] and res.status is Status.SATURATED


def test_restricted_mode_moves_flat_literals_to_constraints():
    # a clause whose selected literals are all flat only feeds assertion and reflection
    for name in ("composition", "primes", "restricted", "assertion"):
        res, p, o = run(name, Mode.SAR)
        for c in res.clauses:
            if not c.clause or not all(lit.is_flat() for lit in o.selected(c.clause)):
                continue
            children = [d for d in res.clauses if c.id in d.parents]
            assert all(d.rule in ("assertion", "reflection") for d in children), (name, c)


@pytest.mark.parametrize("name", ["composition", "primes", "restricted", "assertion", "subst"])
@pytest.mark.parametrize("flt", [PositiveOnly(), NegativeOnly(), MaxLiterals(1)])
def test_filter_holds_on_every_derived_clause(name, flt):
    res, _, _ = run(name, Mode.SA, flt)
    for c in res.clauses:
        if c.rule != "input":
            assert flt.accepts(c.constraint), (name, flt, c)


def test_filters():
    w = World("a b c", predicates={"p": 1})
    pos = PositiveOnly()
    assert pos.accepts(w.aset("a != b; ~p(c)"))
    assert not pos.accepts(w.aset("a = b"))
    neg = NegativeOnly()
    assert neg.accepts(w.aset("a = b; p(c)"))
    assert not neg.accepts(w.aset("a != b"))
    assert MaxLiterals(1).accepts(w.aset("X != a; Y != a"))
    assert not MaxLiterals(1).accepts(w.aset("a = b; b != c"))
    both = AllOf(pos, MaxLiterals(1))
    assert both.accepts(w.aset("a != b")) and not both.accepts(w.aset("a != b; a != c"))
    ent = EntailsOneOf([w.clause("a = b | b = c")])
    assert ent.accepts(w.aset("a != b"))
    assert not ent.accepts(w.aset("a = c"))


def test_parse_filter():
    assert isinstance(parse_filter("positive"), PositiveOnly)
    assert parse_filter("maxlits=3").k == 3
    assert parse_filter("none").name == "none"
    with pytest.raises(ValueError):
        parse_filter("bogus")
    with pytest.raises(ValueError):
        MaxLiterals(-1)


def test_limits_validated():
    with pytest.raises(ValueError):
        Limits(max_clauses=0)
    with pytest.raises(ValueError):
        Limits(weight_ratio=-1)


def test_limit_reached_is_reported():
    res, _, _ = run("monotone", max_weight=30)
    assert res.status is Status.LIMIT
    res, _, _ = run("vars", max_clauses=20)
    assert res.status is Status.LIMIT


def test_weight_limit_still_finds_ex2_answer():
    p, o = load("monotone")
    res = combine_pipeline(p.clauses, o, p.abducibles, p.predicates, Limits(max_weight=30))
    assert "a != b | ~leq(i,j)" in render_all(minimize(res.implicates, o), o)


def test_age_only_and_weight_heavy_agree():
    a, _, o = run("primes", Mode.SAR, weight_ratio=0)
    b, _, _ = run("primes", Mode.SAR, weight_ratio=10)
    ia, ib = minimize(extract(a.clauses), o), minimize(extract(b.clauses), o)
    assert render_all(ia, o) == render_all(ib, o)


def test_no_stored_tautologies_or_duplicates():
    res, _, _ = run("restricted", Mode.SA)
    keys = [(c.clause, c.constraint) for c in res.clauses]
    assert len(keys) == len(set(keys))
    assert not any(is_tautology(c) for c in res.clauses)


def test_trace_events():
    p, o = load("composition")
    buf = io.StringIO()
    saturate(p.clauses, o, p.abducibles, trace=buf)
    lines = buf.getvalue().splitlines()
    assert lines and all(line.startswith("event=") for line in lines)
    events = {line.split()[0] for line in lines}
    assert {"event=derived", "event=asserted"} <= events
    assert any("rule=superposition" in line for line in lines)


def test_fairness_on_small_inputs():
    # a saturated run leaves no passive clause and every input was processed
    for name in ("composition", "assertion", "restricted"):
        res, p, _ = run(name, Mode.SA)
        assert res.status is Status.SATURATED
        assert res.iterations >= len(p.clauses) - 1
