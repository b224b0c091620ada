"""Unification modulo renaming of abducible constants.

Equations between two distinct abducibles are not failures: they are collected
into a positive A-set, the residual constraint of the unifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .aset import ASet, reduce_term
from .terms import Literal, Term, app, apply


class UnificationError(Exception):
    pass


class Clash(UnificationError):
    """Rule (C): distinct heads that are not both abducible."""


class OccursCheck(UnificationError):
    """Rule (O): a variable against a proper superterm of itself."""


@dataclass(frozen=True)
class ASubstitution:
    sigma: Mapping[Term, Term]
    constraint: ASet

    def __repr__(self) -> str:
        binds = ", ".join(f"{k}->{v}" for k, v in sorted(self.sigma.items(), key=lambda kv: kv[0].key))
        return f"({{{binds}}}, {self.constraint})"


def _walk(t: Term, theta: Dict[Term, Term]) -> Term:
    while t.is_var and t in theta:
        t = theta[t]
    return t


def _occurs(x: Term, t: Term, theta: Dict[Term, Term]) -> bool:
    stack = [t]
    while stack:
        u = _walk(stack.pop(), theta)
        if u is x:
            return True
        if not u.ground:
            stack.extend(u.args)
    return False


def _resolve(t: Term, theta: Dict[Term, Term]) -> Term:
    if t.ground:
        return t
    t = _walk(t, theta)
    if t.is_var or t.ground:
        return t
    return app(t.head, *(_resolve(a, theta) for a in t.args))  # type: ignore[arg-type]


def unify_all(
    pairs: Iterable[Tuple[Term, Term]],
    universe: Iterable[Term] = (),
    base: Optional[ASet] = None,
) -> ASubstitution:
    """Most general A-unifier of all ``pairs``, applying the rules leftmost first.

    Bindings are kept triangular while solving and resolved at the end, so no
    term is copied during the run.
    """
    theta: Dict[Term, Term] = {}
    eqs: List[Tuple[Term, Term]] = []
    work = list(pairs)
    work.reverse()
    while work:
        t, s = work.pop()
        t, s = _walk(t, theta), _walk(s, theta)
        if t is s:  # (T)
            continue
        if t.is_abducible and s.is_abducible:  # (E)
            eqs.append((t, s))
            continue
        if not t.is_var and not s.is_var:
            if t.head != s.head:  # (C)
                raise Clash(f"{t} vs {s}")
            work.extend(reversed(list(zip(t.args, s.args))))  # (D)
            continue
        if not t.is_var:
            t, s = s, t
        if _occurs(t, s, theta):  # (O)
            raise OccursCheck(f"{t} occurs in {s}")
        theta[t] = s  # (R)
    sigma = {x: _resolve(u, theta) for x, u in theta.items()}
    x = base if base is not None else ASet(universe)
    if eqs:
        x = x.add(Literal(a, b, True) for a, b in eqs)
    return ASubstitution(sigma, x)


def unify(t: Term, s: Term, universe: Iterable[Term] = ()) -> ASubstitution:
    return unify_all([(t, s)], universe)


def is_unifier(sub: ASubstitution, t: Term, s: Term) -> bool:
    rep = sub.constraint.rep
    return reduce_term(apply(t, sub.sigma), rep) is reduce_term(apply(s, sub.sigma), rep)


def _match(pattern: Term, target: Term, theta: Dict[Term, Term], rep: Mapping[Term, Term]) -> bool:
    """Extend ``theta`` so that ``reduce(pattern theta) == target`` (target already reduced)."""
    if pattern.is_var:
        bound = theta.get(pattern)
        if bound is None:
            theta[pattern] = target
            return True
        return reduce_term(bound, rep) is target
    if pattern.ground:
        return reduce_term(pattern, rep) is target
    if target.is_var or pattern.head != target.head:
        return False
    return all(_match(p, q, theta, rep) for p, q in zip(pattern.args, target.args))


def more_general(lhs: ASubstitution, rhs: ASubstitution) -> bool:
    """``lhs >=_A rhs``: constraint inclusion plus a matcher modulo reduction.

    The matcher only has to agree on variables bound by either substitution;
    other variables are mapped identically by both.
    """
    if not lhs.constraint.subset_of(rhs.constraint):
        return False
    rep = rhs.constraint.rep
    theta: Dict[Term, Term] = {}
    dom = sorted(set(lhs.sigma) | set(rhs.sigma), key=lambda v: v.key)
    for x in dom:
        target = reduce_term(rhs.sigma.get(x, x), rep)
        if not _match(lhs.sigma.get(x, x), target, theta, rep):
            return False
    return True
