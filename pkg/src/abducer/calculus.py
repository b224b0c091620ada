"""Constrained clauses and the inference rules that act on them.

A constrained clause ``[C | X]`` stands for ``X -> C``.  Rules unify modulo
abducible renaming; the residual equations end up in the conclusion's
constraint.  Redundancy is limited to tautology deletion and subsumption.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .aset import ASet, NotFlat, NotPure
from .aunify import ASubstitution, UnificationError, unify
from .ordering import Ordering
from .terms import (
    TRUE,
    Clause,
    Literal,
    Position,
    Substitution,
    Symbol,
    Term,
    app,
    apply,
    renaming,
    replace_at,
    var,
)

SUP = "superposition"
REFL = "reflection"
FACT = "factorization"
ASSERT = "assertion"
SUBST = "substitutivity"
INPUT = "input"


@dataclass(frozen=True)
class AClause:
    clause: Clause
    constraint: ASet
    id: int = 0
    rule: str = INPUT
    parents: Tuple[int, ...] = ()

    @property
    def weight(self) -> int:
        # the clause part counts double: clauses close to [] | X are nearly implicates
        return 2 * self.clause.size + self.constraint.size

    @property
    def is_empty(self) -> bool:
        return not self.clause

    def variables(self) -> List[Term]:
        return list(self._vars)

    @cached_property
    def _vars(self) -> Tuple[Term, ...]:
        seen = dict.fromkeys(self.clause.variables())
        seen.update(dict.fromkeys(self.constraint.variables()))
        return tuple(seen)

    @cached_property
    def features(self) -> Tuple[int, int]:
        """Positive and negative literal counts, for subsumption prefiltering."""
        pos = sum(1 for lit in self.clause if lit.positive)
        return pos, len(self.clause) - pos

    def with_id(self, ident: int) -> "AClause":
        return AClause(self.clause, self.constraint, ident, self.rule, self.parents)

    def renamed(self, prefix: str) -> "AClause":
        sigma = renaming(self.variables(), prefix)
        if not sigma:
            return self
        return AClause(self.clause.apply(sigma), self.constraint.apply(sigma), self.id, self.rule, self.parents)

    def __str__(self) -> str:
        return f"[{self.clause} | {self.constraint}]"


def normalize(lits: Iterable[Literal], constraint: ASet, rule: str = INPUT, parents: Tuple[int, ...] = ()) -> AClause:
    """Delete false literals, merge duplicates and rename variables to X0, X1, ..."""
    kept: Dict[Literal, None] = {}
    for lit in lits:
        if lit.is_trivial_false():
            continue
        kept[lit] = None
    clause = Clause(kept)
    order: Dict[Term, None] = {}
    for lit in clause:
        order.update(dict.fromkeys(lit.variables()))
    order.update(dict.fromkeys(constraint.variables()))
    sigma = renaming(order, "X")
    if sigma:
        clause = clause.apply(sigma)
        constraint = constraint.apply(sigma)
    return AClause(clause, constraint, 0, rule, parents)


# --- redundancy ------------------------------------------------------------


def is_tautology(c: AClause) -> bool:
    x = c.constraint
    if not x.satisfiable():
        return True
    seen: Dict[Term, bool] = {}
    for lit in c.clause:
        r = x.reduce_literal(lit)
        if r.positive and r.left is r.right:
            return True
        key = (r.left, r.right)
        pol = seen.setdefault(key, r.positive)  # type: ignore[arg-type]
        if pol != r.positive:
            return True
        if r.is_flat() and x.contains(r):
            return True
    return False


def _match_term(p: Term, t: Term, theta: Dict[Term, Term]) -> bool:
    if p.is_var:
        b = theta.get(p)
        if b is None:
            theta[p] = t
            return True
        return b is t
    if p.ground:
        return p is t
    if t.is_var or p.head != t.head:
        return False
    for a, b in zip(p.args, t.args):
        if not _match_term(a, b, theta):
            return False
    return True


def _match_literal(p: Literal, t: Literal, theta: Dict[Term, Term]) -> Iterator[Dict[Term, Term]]:
    if p.positive != t.positive:
        return
    for l, r in ((t.left, t.right), (t.right, t.left)):
        th = dict(theta)
        if _match_term(p.left, l, th) and _match_term(p.right, r, th):
            yield th
        if p.left.is_predicate_atom or t.left is t.right:
            break


def _constraint_matches(pats: Sequence[Literal], x: ASet, theta: Dict[Term, Term]) -> bool:
    if not pats:
        return True
    first, rest = pats[0], pats[1:]
    inst = first.apply(theta) if theta else first
    if all(v in theta for v in first.variables()) or inst.ground:
        return x.contains(inst) and _constraint_matches(rest, x, theta)
    pool = x.preds if first.left.is_predicate_atom else x.diseqs
    pat = x.reduce_literal(first)
    for cand in sorted(pool, key=lambda lit: lit.sort_key):
        for th in _match_literal(pat, cand, theta):
            if _constraint_matches(rest, x, th):
                return True
    return False


def subsumes(general: AClause, specific: AClause) -> bool:
    """Is there a substitution mapping ``general`` into ``specific``?

    The clause part must map into a sub-multiset of the specific clause and
    the constraint into the logical closure of the specific constraint.
    """
    d, c = general.clause, specific.clause
    fg, fs = general.features, specific.features
    if fg[0] > fs[0] or fg[1] > fs[1]:
        return False
    for lit in d:
        if lit.ground and lit not in c:
            return False
    specific_vars = set(specific.variables())
    if specific_vars & set(general.variables()):
        general = general.renamed("G")
        d = general.clause
    y_pats = general.constraint.literals()
    x = specific.constraint

    def rec(i: int, used: List[bool], theta: Dict[Term, Term]) -> bool:
        if i == len(d):
            return _constraint_matches(y_pats, x, theta)
        for j, lit in enumerate(c):
            if used[j]:
                continue
            for th in _match_literal(d[i], lit, theta):
                used[j] = True
                ok = rec(i + 1, used, th)
                used[j] = False
                if ok:
                    return True
        return False

    return rec(0, [False] * len(c), {})


# --- inference rules ---------------------------------------------------------


@dataclass
class Calculus:
    ordering: Ordering
    abducibles: Tuple[Term, ...]
    predicates: Tuple[Symbol, ...] = ()
    sar: bool = False
    # optional early rejection of conclusions by their constraint alone
    admissible: Optional[Callable[[ASet], bool]] = None
    _fresh: int = field(default=0, init=False)

    def empty_constraint(self) -> ASet:
        return ASet(self.abducibles)

    def input_clause(self, lits: Iterable[Literal]) -> AClause:
        return normalize(lits, self.empty_constraint())

    # helpers

    def _selected_in_instance(self, lits: Sequence[Literal], i: int, sigma: Substitution) -> bool:
        if lits[i].positive is False:
            return True
        inst = [lit.apply(sigma) for lit in lits]
        return i in self.ordering.select(inst)

    @staticmethod
    def _pure(sigma: Substitution, x: ASet) -> bool:
        return all(apply(v, sigma).is_flat_arg for v in x.variables())

    def _orientations(self, lit: Literal) -> List[Tuple[Term, Term]]:
        return self.ordering.max_side(lit)

    def _conclude(
        self,
        lits: Iterable[Literal],
        constraint: ASet,
        sigma: Substitution,
        rule: str,
        parents: Tuple[int, ...],
    ) -> Optional[AClause]:
        try:
            x = constraint.apply(sigma)
        except NotPure:
            return None
        if not x.satisfiable():
            return None  # a tautology whatever the clause part
        if self.admissible is not None and not self.admissible(x):
            return None
        out: List[Literal] = []
        for lit in lits:
            inst = lit.apply(sigma)
            if inst.left.is_true and inst.right.is_true:
                if inst.positive:
                    return None  # TRUE = TRUE makes the clause valid
                continue
            out.append(inst)
        return normalize(out, x, rule, parents)

    # rules

    def superposition(self, into: AClause, frm: AClause) -> List[AClause]:
        out: List[AClause] = []
        frm_r = frm.renamed("Y")
        ilits = list(into.clause)
        flits = list(frm_r.clause)
        xvars = set(into.constraint.variables())
        isel = self.ordering.select(ilits)
        fsel = [j for j in self.ordering.select(flits) if flits[j].positive]
        if not fsel:
            return out
        for i in isel:
            lit = ilits[i]
            for t, s in self._orientations(lit):
                for p, sub in t.subterms():
                    if sub.is_true:
                        continue
                    if sub.is_var and sub not in xvars:
                        continue
                    for j in fsel:
                        flit = flits[j]
                        for u, v in self._orientations(flit):
                            if u.is_predicate_atom != sub.is_predicate_atom:
                                continue
                            if u.is_predicate_atom and lit.positive:
                                continue  # TRUE = TRUE, a tautology
                            c = self._sup_one(into, frm_r, ilits, flits, i, j, t, s, p, u, v)
                            if c is not None:
                                out.append(c)
        return out

    def _sup_one(
        self,
        into: AClause,
        frm: AClause,
        ilits: List[Literal],
        flits: List[Literal],
        i: int,
        j: int,
        t: Term,
        s: Term,
        p: Position,
        u: Term,
        v: Term,
    ) -> Optional[AClause]:
        sub = _at(t, p)
        if u.ground and sub.ground and (u is sub or (u.is_abducible and sub.is_abducible)):
            # ground flat case: no substitution, at most one new equation
            sigma: Substitution = {}
            extra = None if u is sub else Literal.make(u, sub, True)
        else:
            try:
                mgu = unify(u, sub, self.abducibles)
            except UnificationError:
                return None
            sigma = mgu.sigma
            extra = mgu.constraint
        if sigma:
            if not (self._pure(sigma, into.constraint) and self._pure(sigma, frm.constraint)):
                return None
            us, vs, ts, ss = (apply(z, sigma) for z in (u, v, t, s))
        else:
            us, vs, ts, ss = u, v, t, s
        if self.ordering.geq_a(vs, us) or self.ordering.geq_a(ss, ts):
            return None
        if sigma:
            if not self._selected_in_instance(ilits, i, sigma):
                return None
            if not self._selected_in_instance(flits, j, sigma):
                return None
        lit = ilits[i]
        # SAR forbids inferences on A-flat literals, judged on the instance
        if self.sar and (lit.apply(sigma).is_flat() or flits[j].apply(sigma).is_flat()):
            return None
        new = Literal.make(replace_at(t, p, v), s, lit.positive)
        rest = [l for k, l in enumerate(ilits) if k != i] + [l for k, l in enumerate(flits) if k != j]
        constraint = into.constraint.union(frm.constraint)
        if isinstance(extra, ASet):
            constraint = constraint.union(extra)
        elif extra is not None:
            try:
                constraint = constraint.add([extra])
            except NotFlat:
                return None
        return self._conclude(rest + [new], constraint, sigma, SUP, (into.id, frm.id))

    def reflection(self, c: AClause) -> List[AClause]:
        out: List[AClause] = []
        lits = list(c.clause)
        for i in self.ordering.select(lits):
            lit = lits[i]
            if lit.positive or lit.left.is_predicate_atom:
                continue
            try:
                mgu = unify(lit.left, lit.right, self.abducibles)
            except UnificationError:
                continue
            if not self._pure(mgu.sigma, c.constraint):
                continue
            if not self._selected_in_instance(lits, i, mgu.sigma):
                continue
            rest = [l for k, l in enumerate(lits) if k != i]
            r = self._conclude(rest, c.constraint.union(mgu.constraint), mgu.sigma, REFL, (c.id,))
            if r is not None:
                out.append(r)
        return out

    def factorization(self, c: AClause) -> List[AClause]:
        out: List[AClause] = []
        lits = list(c.clause)
        if any(not lit.positive for lit in lits):
            return out
        for i in self.ordering.select(lits):
            li = lits[i]
            for j, lj in enumerate(lits):
                if j == i:
                    continue
                for t, s in self._orientations(li):
                    for u, v in self._orientations(lj):
                        if t.is_predicate_atom != u.is_predicate_atom:
                            continue
                        try:
                            mgu = unify(t, u, self.abducibles)
                        except UnificationError:
                            continue
                        sigma = mgu.sigma
                        if not self._pure(sigma, c.constraint):
                            continue
                        ts, ss, us, vs = (apply(z, sigma) for z in (t, s, u, v))
                        if self.ordering.geq_a(ss, ts) or self.ordering.geq_a(vs, us):
                            continue
                        if not self._selected_in_instance(lits, i, sigma):
                            continue
                        if self.sar and (li.apply(sigma).is_flat() or lj.apply(sigma).is_flat()):
                            continue
                        rest = [l for k, l in enumerate(lits) if k not in (i, j)]
                        new = [Literal.make(t, s, True)]
                        if ss is not vs:
                            new.append(Literal.make(s, v, False))
                        r = self._conclude(rest + new, c.constraint.union(mgu.constraint), sigma, FACT, (c.id,))
                        if r is not None:
                            out.append(r)
        return out

    def assertion(self, c: AClause) -> List[AClause]:
        out: List[AClause] = []
        if not self.abducibles:
            return out
        lits = list(c.clause)
        for i in self.ordering.select(lits):
            lit = lits[i]
            if not lit.is_flat():
                continue
            if not lit.left.is_predicate_atom and not lit.positive:
                continue
            rest = [l for k, l in enumerate(lits) if k != i]
            try:
                x = c.constraint.add([lit.complement()])
            except NotFlat:  # pragma: no cover - guarded by is_flat
                continue
            out.append(normalize(rest, x, ASSERT, (c.id,)))
        return out

    def substitutivity(self, c: AClause) -> List[AClause]:
        """Instances with a single non-reflexive premise.

        For a selected flat equation ``t = s`` and each predicate argument
        slot, builds ``[p(.., t, ..) ~ TRUE v C | X + {p(.., s, ..) ~ TRUE}]``
        with fresh variables in the other slots, for both orientations and
        both polarities.  Instances with several non-reflexive premises are
        reached from these by superposition into the fresh variables.
        """
        out: List[AClause] = []
        if self.sar or not self.predicates:
            return out
        lits = list(c.clause)
        for i in self.ordering.select(lits):
            lit = lits[i]
            if not lit.positive or lit.left.is_predicate_atom or not lit.is_flat() or lit.left is lit.right:
                continue
            rest = [l for k, l in enumerate(lits) if k != i]
            for pred in self.predicates:
                zs = [var(f"Z{k}") for k in range(pred.arity)]
                for k in range(pred.arity):
                    for t, s in ((lit.left, lit.right), (lit.right, lit.left)):
                        a_t = app(pred, *(zs[:k] + [t] + zs[k + 1 :]))
                        a_s = app(pred, *(zs[:k] + [s] + zs[k + 1 :]))
                        for positive in (True, False):
                            x = c.constraint.add([Literal(a_s, TRUE, positive)])
                            out.append(normalize(rest + [Literal(a_t, TRUE, positive)], x, SUBST, (c.id,)))
        return out

    def infer_single(self, c: AClause) -> List[AClause]:
        return self.reflection(c) + self.factorization(c) + self.assertion(c) + self.substitutivity(c)

    def infer_pair(self, given: AClause, other: AClause) -> List[AClause]:
        out = self.superposition(given, other)
        if other is not given:
            out += self.superposition(other, given)
        return out


def _at(t: Term, p: Position) -> Term:
    for k in p:
        t = t.args[k - 1]
    return t
