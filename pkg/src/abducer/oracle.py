"""Brute-force ground semantics used as a reference for the saturation engine.

Consistency of literal sets is decided by naive congruence closure over the
finite set of subterms, and clause sets by case splitting.  Nothing here
depends on the calculus modules.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .aset import ASet, complete_extensions
from .implicates import minimize
from .terms import TRUE, Clause, Literal, Symbol, Term, app


class UniverseTooLarge(ValueError):
    pass


DEFAULT_BOUND = 10


def _subterms(t: Term, acc: Dict[Term, None]) -> None:
    if t in acc:
        return
    for a in t.args:
        _subterms(a, acc)
    acc[t] = None


class CongruenceClosure:
    """Congruence closure over a fixed finite set of ground terms."""

    def __init__(self, terms: Iterable[Term]) -> None:
        self.terms = list(terms)
        self.parent: Dict[Term, Term] = {t: t for t in self.terms}

    def find(self, t: Term) -> Term:
        while self.parent[t] is not t:
            self.parent[t] = self.parent[self.parent[t]]
            t = self.parent[t]
        return t

    def _close(self) -> None:
        changed = True
        compound = [t for t in self.terms if t.args]
        while changed:
            changed = False
            sig: Dict[tuple, Term] = {}
            for t in compound:
                key = (t.head, tuple(self.find(a) for a in t.args))
                other = sig.get(key)
                if other is None:
                    sig[key] = t
                elif self.find(other) is not self.find(t):
                    self.parent[self.find(t)] = self.find(other)
                    changed = True

    def consistent(self, units: Sequence[Literal]) -> bool:
        for t in self.terms:
            self.parent[t] = t
        for lit in units:
            if lit.positive:
                a, b = self.find(lit.left), self.find(lit.right)
                if a is not b:
                    self.parent[a] = b
        self._close()
        return all(lit.positive or self.find(lit.left) is not self.find(lit.right) for lit in units)


class GroundSolver:
    def __init__(self, clauses: Sequence[Clause], extra: Iterable[Literal] = (), bound: int = DEFAULT_BOUND) -> None:
        acc: Dict[Term, None] = {}
        for c in clauses:
            for lit in c:
                if not lit.ground:
                    raise ValueError(f"oracle inputs must be ground, got {lit}")
                _subterms(lit.left, acc)
                _subterms(lit.right, acc)
        for lit in extra:
            _subterms(lit.left, acc)
            _subterms(lit.right, acc)
        acc.pop(TRUE, None)
        if len(acc) > bound:
            raise UniverseTooLarge(f"{len(acc)} distinct subterms exceed the bound {bound}")
        acc[TRUE] = None
        self.cc = CongruenceClosure(acc)
        self.clauses = list(clauses)

    def satisfiable(self, units: Sequence[Literal] = ()) -> bool:
        return self._search(list(units), self.clauses)

    def _search(self, units: List[Literal], clauses: List[Clause]) -> bool:
        if not self.cc.consistent(units):
            return False
        if not clauses:
            return True
        first, rest = clauses[0], clauses[1:]
        return any(self._search(units + [lit], rest) for lit in first)


def oracle_entails(s: Sequence[Clause], c: Clause, bound: int = DEFAULT_BOUND) -> bool:
    """``S |= C`` for ground clauses."""
    neg = [lit.complement() for lit in c]
    return not GroundSolver(s, neg, bound).satisfiable(neg)


def _holds(lit: Literal, model: ASet) -> bool:
    if lit.left.is_predicate_atom:
        atom = model.reduce(lit.left)
        for p in model.preds:
            if p.left is atom:
                return p.positive == lit.positive
        raise ValueError(f"incomplete model for {lit}")
    same = model.find(lit.left) is model.find(lit.right)
    return same == lit.positive


def candidate_literals(abducibles: Sequence[Term], predicates: Sequence[Symbol]) -> List[Literal]:
    lits: List[Literal] = []
    for a, b in itertools.combinations(abducibles, 2):
        lits.append(Literal.make(a, b, True))
        lits.append(Literal.make(a, b, False))
    for p in predicates:
        for args in itertools.product(abducibles, repeat=p.arity):
            atom = app(p, *args)
            lits.append(Literal(atom, TRUE, True))
            lits.append(Literal(atom, TRUE, False))
    return lits


def compatible_models(
    s: Sequence[Clause],
    abducibles: Sequence[Term],
    predicates: Sequence[Symbol] = (),
    bound: int = DEFAULT_BOUND,
) -> List[ASet]:
    """Complete A-sets that can be extended to a model of ``S``."""
    solver = GroundSolver(s, candidate_literals(abducibles, predicates), bound)
    out = []
    for m in complete_extensions(ASet(abducibles), predicates):
        units = [lit for lit in _model_literals(m, abducibles, predicates)]
        if solver.satisfiable(units):
            out.append(m)
    return out


def _model_literals(m: ASet, abducibles: Sequence[Term], predicates: Sequence[Symbol]) -> List[Literal]:
    out = []
    for a, b in itertools.combinations(abducibles, 2):
        out.append(Literal.make(a, b, m.find(a) is m.find(b)))
    for p in predicates:
        for args in itertools.product(abducibles, repeat=p.arity):
            lit = Literal(app(p, *args), TRUE, True)
            out.append(lit if _holds(lit, m) else lit.complement())
    return out


def oracle_implicates(
    s: Sequence[Clause],
    abducibles: Sequence[Term],
    max_len: int,
    predicates: Sequence[Symbol] = (),
    bound: int = DEFAULT_BOUND,
    limit: int = 200000,
) -> List[Clause]:
    """Prime flat implicates of ``S`` with at most ``max_len`` literals.

    A flat clause is entailed exactly when it holds in every complete
    abducible interpretation compatible with ``S``, so the candidates are
    evaluated against those interpretations only.
    """
    models = compatible_models(s, abducibles, predicates, bound)
    if not models:
        return [Clause()]
    lits = candidate_literals(abducibles, predicates)
    truth = [[_holds(lit, m) for m in models] for lit in lits]
    found: List[Tuple[int, ...]] = []
    checked = 0
    empty = GroundSolver([], lits, bound=len(abducibles) + sum(1 for _ in lits))
    for n in range(1, max_len + 1):
        for combo in itertools.combinations(range(len(lits)), n):
            checked += 1
            if checked > limit:
                raise UniverseTooLarge("candidate enumeration exceeds the limit")
            if _tautological(combo, lits):
                continue
            # valid clauses such as transitivity instances are not implicates
            if not empty.satisfiable([lits[i].complement() for i in combo]):
                continue
            cs = set(combo)
            if any(set(f) <= cs for f in found):
                continue
            if all(any(truth[i][k] for i in combo) for k in range(len(models))):
                found.append(combo)
    return minimize(Clause(lits[i] for i in f) for f in found)


def _tautological(combo: Tuple[int, ...], lits: List[Literal]) -> bool:
    # each atom contributes two consecutive candidates: positive then negative
    atoms = [i // 2 for i in combo]
    return len(set(atoms)) != len(atoms)
