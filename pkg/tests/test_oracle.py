import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abducer.implicates import entails_ground
from abducer.oracle import (
    CongruenceClosure,
    GroundSolver,
    UniverseTooLarge,
    candidate_literals,
    compatible_models,
    oracle_entails,
    oracle_implicates,
)
from abducer.terms import Clause, Literal

from conftest import World

PRIMES = World("a b c d e f")
PRIMES_S = [PRIMES.clause(c) for c in ("a != c | b != c | d = e", "a = c | a = f", "b = c | a = f", "f != b")]


def test_primes_entailment():
    assert oracle_entails(PRIMES_S, PRIMES.clause("a != b | d = e"))
    for c in PRIMES_S:
        assert oracle_entails(PRIMES_S, c)


def test_fresh_constants_not_entailed():
    w = World("a b c d")
    assert not oracle_entails([w.clause("a = b")], w.clause("c = d"))
    # the separating model {a,b},{c},{d}
    models = compatible_models([w.clause("a = b")], w.abducibles)
    assert any(m.find(w.t("c")) is not m.find(w.t("d")) for m in models)


def test_primes_prime_implicates():
    out = oracle_implicates(PRIMES_S, PRIMES.abducibles, 3)
    assert PRIMES.clause("a != b | d = e") in out
    assert PRIMES.clause("a != c | b != c | d = e") not in out


def test_single_equation_brute_force():
    w = World("a b")
    # the four candidates a = b, a != b, a = b | a != b (valid), and the empty clause;
    # only a = b holds in the single model {a = b}
    assert oracle_implicates([w.clause("a = b")], w.abducibles, 2) == [w.clause("a = b")]


def test_unsatisfiable_input():
    w = World("a b")
    assert oracle_implicates([w.clause("a = b"), w.clause("a != b")], w.abducibles, 2) == [Clause()]


def test_valid_clauses_are_skipped():
    w = World("a b c")
    out = oracle_implicates([w.clause("a = b | a = c")], w.abducibles, 3)
    assert out == [w.clause("a = b | a = c")]


def test_congruence_closure():
    w = World("a b c", functions={"f": 1, "g": 2})
    terms = [w.t(s) for s in ("a", "b", "c", "f(a)", "f(c)", "g(f(a), b)", "g(f(c), b)")]
    cc = CongruenceClosure(terms)
    assert not cc.consistent([w.lit("a = c"), w.lit("g(f(a), b) != g(f(c), b)")])
    assert cc.consistent([w.lit("a = c"), w.lit("f(a) != b")])


def test_functions_in_input():
    w = World("a b", functions={"f": 1})
    s = [w.clause("f(a) = a"), w.clause("f(b) = b"), w.clause("f(a) != f(b)")]
    assert oracle_entails(s, w.clause("a != b"))
    assert oracle_implicates(s, w.abducibles, 2) == [w.clause("a != b")]


def test_bounds():
    w = World("a b c", functions={"f": 1})
    with pytest.raises(UniverseTooLarge):
        oracle_entails([w.clause("f(f(f(a))) = b")], w.clause("a = b"), bound=3)
    with pytest.raises(ValueError):
        GroundSolver([w.clause("X = a")])
    with pytest.raises(UniverseTooLarge):
        oracle_implicates([w.clause("a = b")], w.abducibles, 3, limit=5)


def test_models_and_candidates():
    w = World("a b c", predicates={"p": 1})
    assert len(candidate_literals(w.abducibles, w.sig.predicates)) == 2 * 3 + 2 * 3
    assert len(compatible_models([], w.abducibles)) == 5
    assert len(compatible_models([w.clause("a != b"), w.clause("b != c")], w.abducibles)) == 2


def test_predicates():
    w = World("a b", predicates={"p": 1})
    out = oracle_implicates([w.clause("a = b")], w.abducibles, 2, w.sig.predicates)
    assert out == [w.clause("a = b")]
    s = [w.clause("p(a)"), w.clause("~p(b)")]
    assert set(oracle_implicates(s, w.abducibles, 2, w.sig.predicates)) == {
        w.clause("a != b"),
        w.clause("p(a)"),
        w.clause("~p(b)"),
    }


G = World("a b c d", functions={"f": 1})
GT = [G.t(s) for s in ("a", "b", "c", "d", "f(a)", "f(b)")]
GLIT = st.builds(lambda u, v, p: Literal.make(u, v, p), st.sampled_from(GT), st.sampled_from(GT), st.booleans())
GCL = st.lists(GLIT, min_size=1, max_size=3).map(Clause)
FLAT = st.builds(
    lambda u, v, p: Literal.make(u, v, p), st.sampled_from(G.abducibles), st.sampled_from(G.abducibles), st.booleans()
)


@settings(max_examples=100, deadline=None)
@given(st.lists(GCL, max_size=3), st.lists(GCL, max_size=2), st.lists(FLAT, max_size=3).map(Clause))
def test_monotone(s, extra, c):
    if oracle_entails(s, c):
        assert oracle_entails(s + extra, c)


@settings(max_examples=60, deadline=None)
@given(st.lists(GCL, max_size=3))
def test_prime_sets_are_irredundant(s):
    out = oracle_implicates(s, G.abducibles, 3)
    for x, y in itertools.permutations(out, 2):
        assert not entails_ground(x, y)
    for c in out:
        assert oracle_entails(s, c)
