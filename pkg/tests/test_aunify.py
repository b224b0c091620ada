import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abducer.aset import ASet
from abducer.aunify import ASubstitution, Clash, OccursCheck, is_unifier, more_general, unify, unify_all
from abducer.terms import apply, var

from conftest import World, collapse_maps, term_strategy

W = World("a b c", functions={"f": 2, "g": 1, "h": 3, "k": 0})
A = W.abducibles
X, Y, Z = var("X"), var("Y"), var("Z")


def test_residual_equation():
    mgu = unify(W.t("f(a, b)"), W.t("f(X, X)"), A)
    assert dict(mgu.sigma) == {X: W.t("a")}
    assert mgu.constraint == W.aset("a = b")


def test_several_most_general_unifiers_are_equivalent():
    mgu = unify(W.t("f(g(a), g(b))"), W.t("f(g(X), g(Y))"), A)
    assert dict(mgu.sigma) == {X: W.t("a"), Y: W.t("b")}
    assert mgu.constraint == ASet(A)
    swapped = ASubstitution({X: W.t("b"), Y: W.t("a")}, W.aset("a = b"))
    straight = ASubstitution({X: W.t("a"), Y: W.t("b")}, W.aset("a = b"))
    assert more_general(straight, swapped) and more_general(swapped, straight)


def test_identical_terms():
    t = W.t("f(X, g(a))")
    mgu = unify(t, t, A)
    assert dict(mgu.sigma) == {} and not mgu.constraint


def test_occurs_check():
    with pytest.raises(OccursCheck):
        unify(X, W.t("g(X)"), A)
    with pytest.raises(OccursCheck):
        unify(W.t("f(X, Y)"), W.t("f(Y, g(X))"), A)


def test_clash():
    with pytest.raises(Clash):
        unify(W.t("g(a)"), W.t("f(a, a)"), A)
    with pytest.raises(Clash):
        unify(W.t("k"), W.t("a"), A)


def test_more_general_with_witness():
    w = World("a b c", functions={"f": 2})
    z1 = var("Z1")
    lhs = ASubstitution({X: w.t("a"), Y: w.t("c"), Z: w.t("f(a, Z1)")}, w.aset("a = c"))
    rhs = ASubstitution({X: w.t("a"), Y: w.t("b"), Z: w.t("f(b, b)")}, w.aset("a = b; b = c"))
    assert more_general(lhs, rhs)
    assert not more_general(rhs, lhs)


def test_more_general_trivial_cases():
    sub = ASubstitution({X: W.t("g(a)")}, W.aset("a = b"))
    assert more_general(sub, sub)
    assert more_general(ASubstitution({}, ASet(A)), sub)
    assert not more_general(sub, ASubstitution({}, ASet(A)))


def test_unify_all_leftmost_is_deterministic():
    pairs = [(X, W.t("a")), (X, W.t("b"))]
    r1, r2 = unify_all(pairs, A), unify_all(pairs, A)
    assert dict(r1.sigma) == dict(r2.sigma) == {X: W.t("a")}
    assert r1.constraint == W.aset("a = b")


TERMS = term_strategy(W, variables=("X", "Y", "Z"), max_leaves=6)
MAPS = collapse_maps(W)
POOL = [W.t(s) for s in ("a", "b", "c", "k", "g(a)", "f(b, c)")]


@settings(max_examples=300, deadline=None)
@given(TERMS, TERMS)
def test_sound(t, s):
    try:
        mgu = unify(t, s, A)
    except (Clash, OccursCheck):
        return
    assert is_unifier(mgu, t, s)
    # residual equations relate abducibles only
    for a, r in mgu.constraint.rep.items():
        assert a.is_abducible and r.is_abducible


@settings(max_examples=150, deadline=None)
@given(TERMS, TERMS)
def test_most_general_against_ground_unifiers(t, s):
    vs = sorted(set(t.variables()) | set(s.variables()), key=lambda v: v.name)
    try:
        mgu = unify(t, s, A)
    except (Clash, OccursCheck):
        mgu = None
    for values in itertools.product(POOL, repeat=len(vs)):
        theta = dict(zip(vs, values))
        ts, ss = apply(t, theta), apply(s, theta)
        for x in MAPS:
            if x.reduce(ts) is x.reduce(ss):
                assert mgu is not None, (t, s, theta, x)
                assert more_general(mgu, ASubstitution(theta, x))
