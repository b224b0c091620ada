"""A-sets: constraints over abducible constants.

An A-set is stored in normal form: a map sending every non-representative
abducible to the least member of its class, plus the reduced disequations and
predicate literals.  Logical membership reduces the queried literal first, so
the congruence closure of the textbook definition never has to be built.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .terms import TRUE, Clause, Literal, Substitution, Symbol, Term, app, apply

Universe = Tuple[Term, ...]


class NotPure(ValueError):
    """A substitution maps a constraint variable outside variables and abducibles."""


class NotFlat(ValueError):
    """A literal cannot be stored in an A-set."""


def _rank(t: Term) -> int:
    return t.head.rank  # type: ignore[union-attr]


def reduce_term(t: Term, rep: Mapping[Term, Term]) -> Term:
    if not rep or t.is_var:
        return t
    if t.is_abducible:
        return rep.get(t, t)
    if not t.args:
        return t
    args = tuple(reduce_term(a, rep) for a in t.args)
    if all(x is y for x, y in zip(args, t.args)):
        return t
    return app(t.head, *args)  # type: ignore[arg-type]


def reduce_literal(lit: Literal, rep: Mapping[Term, Term]) -> Literal:
    if not rep:
        return lit
    left, right = reduce_term(lit.left, rep), reduce_term(lit.right, rep)
    if left is lit.left and right is lit.right:
        return lit
    return Literal.make(left, right, lit.positive)


class ASet:
    """Immutable A-set in normal form."""

    __slots__ = ("universe", "rep", "diseqs", "preds", "_sat", "_hash", "_vars", "_lits")

    universe: Universe
    rep: Dict[Term, Term]
    diseqs: FrozenSet[Literal]
    preds: FrozenSet[Literal]

    def __init__(
        self,
        universe: Iterable[Term] = (),
        rep: Optional[Mapping[Term, Term]] = None,
        diseqs: Iterable[Literal] = (),
        preds: Iterable[Literal] = (),
    ) -> None:
        self.universe = tuple(universe)
        self.rep = dict(rep or {})
        r = self.rep
        self.diseqs = frozenset(reduce_literal(d, r) for d in diseqs)
        self.preds = frozenset(reduce_literal(p, r) for p in preds)
        self._sat: Optional[bool] = None
        self._hash: Optional[int] = None
        self._vars: Optional[List[Term]] = None
        self._lits: Optional[List[Literal]] = None

    @classmethod
    def of(cls, universe: Iterable[Term], literals: Iterable[Literal] = ()) -> "ASet":
        return cls(universe).add(literals)

    # --- structure ---------------------------------------------------------

    def _key(self) -> tuple:
        return (frozenset(self.rep.items()), self.diseqs, self.preds)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ASet):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.rep or self.diseqs or self.preds)

    def __len__(self) -> int:
        return len(self.rep) + len(self.diseqs) + len(self.preds)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(lit) for lit in self.literals()) + "}"

    @property
    def ground(self) -> bool:
        return all(lit.ground for lit in self.diseqs) and all(lit.ground for lit in self.preds)

    def variables(self) -> List[Term]:
        if self._vars is None:
            seen: Dict[Term, None] = {}
            for lit in sorted(self.diseqs | self.preds, key=lambda lit: lit.sort_key):
                for v in lit.variables():
                    seen[v] = None
            self._vars = list(seen)
        return list(self._vars)

    def find(self, a: Term) -> Term:
        return self.rep.get(a, a)

    def reduce(self, t: Term) -> Term:
        return reduce_term(t, self.rep)

    def reduce_literal(self, lit: Literal) -> Literal:
        return reduce_literal(lit, self.rep)

    def reduce_clause(self, c: Iterable[Literal]) -> Clause:
        return Clause(reduce_literal(lit, self.rep) for lit in c)

    def equations(self) -> List[Literal]:
        """Oriented equations ``a = rep(a)``, greatest abducible first."""
        pairs = sorted(self.rep.items(), key=lambda kv: -_rank(kv[0]))
        return [Literal(a, r, True) for a, r in pairs]

    def literals(self) -> List[Literal]:
        """Concise literal form: equations, then disequations, then predicate literals."""
        if self._lits is None:
            self._lits = (
                self.equations()
                + sorted(self.diseqs, key=lambda lit: lit.sort_key)
                + sorted(self.preds, key=lambda lit: lit.sort_key)
            )
        return list(self._lits)

    def complement(self) -> Clause:
        return Clause(lit.complement() for lit in self.literals())

    @property
    def size(self) -> int:
        return sum(lit.size for lit in self.literals())

    # --- construction ----------------------------------------------------------

    def _merged_rep(self, pairs: Iterable[Tuple[Term, Term]]) -> Dict[Term, Term]:
        rep = dict(self.rep)
        for a, b in pairs:
            ra, rb = rep.get(a, a), rep.get(b, b)
            if ra is rb:
                continue
            keep, drop = (ra, rb) if _rank(ra) < _rank(rb) else (rb, ra)
            for k, v in list(rep.items()):
                if v is drop:
                    rep[k] = keep
            rep[drop] = keep
        return rep

    def add(self, literals: Iterable[Literal]) -> "ASet":
        eqs: List[Tuple[Term, Term]] = []
        diseqs = list(self.diseqs)
        preds = list(self.preds)
        for lit in literals:
            if lit.left.is_predicate_atom:
                if not all(a.is_flat_arg for a in lit.left.args):
                    raise NotFlat(f"{lit} is not A-flat")
                preds.append(lit)
            elif not (lit.left.is_flat_arg and lit.right.is_flat_arg):
                raise NotFlat(f"{lit} is not A-flat")
            elif lit.positive:
                if lit.left is lit.right:
                    continue
                if lit.left.is_var or lit.right.is_var:
                    raise NotFlat(f"non-ground equation {lit} cannot be stored")
                eqs.append((lit.left, lit.right))
            else:
                diseqs.append(lit)
        if not eqs and len(diseqs) == len(self.diseqs) and len(preds) == len(self.preds):
            return self
        return ASet(self.universe, self._merged_rep(eqs), diseqs, preds)

    def union(self, other: "ASet") -> "ASet":
        if not other:
            return self
        if not self:
            return other if other.universe == self.universe else ASet(self.universe, other.rep, other.diseqs, other.preds)
        rep = self._merged_rep(other.rep.items())
        return ASet(self.universe, rep, itertools.chain(self.diseqs, other.diseqs), itertools.chain(self.preds, other.preds))

    def apply(self, sigma: Substitution) -> "ASet":
        """``X sigma``; ``sigma`` must map constraint variables to variables or abducibles."""
        if not sigma:
            return self
        vs = self.variables()
        if not any(v in sigma for v in vs):
            return self
        for v in vs:
            img = sigma.get(v, v)
            if not img.is_flat_arg:
                raise NotPure(f"{v} is mapped to {img}")
        diseqs = [Literal.make(apply(d.left, sigma), apply(d.right, sigma), False) for d in self.diseqs]
        preds = [Literal.make(apply(p.left, sigma), p.right, p.positive) for p in self.preds]
        return ASet(self.universe, self.rep, diseqs, preds)

    # --- queries --------------------------------------------------------------

    def contains(self, lit: Literal) -> bool:
        """Logical membership in the closed set."""
        lit = reduce_literal(lit, self.rep)
        if lit.left.is_predicate_atom:
            return lit in self.preds
        if not (lit.left.is_flat_arg and lit.right.is_flat_arg):
            return False
        if lit.positive:
            return lit.left is lit.right
        return lit in self.diseqs

    def subset_of(self, other: "ASet") -> bool:
        return all(other.contains(lit) for lit in self.literals())

    def satisfiable(self) -> bool:
        if self._sat is None:
            self._sat = self._check_sat()
        return self._sat

    def _check_sat(self) -> bool:
        for d in self.diseqs:
            if d.left is d.right:
                return False
        polarity: Dict[Term, bool] = {}
        for p in self.preds:
            if polarity.setdefault(p.left, p.positive) != p.positive:
                return False
        vs = self.variables()
        if not vs:
            return True
        return next(self.solutions(vs), None) is not None

    def values(self) -> List[Term]:
        """Class representatives of the universe, the candidate values of variables."""
        return sorted({self.find(a) for a in self.universe}, key=_rank)

    def solutions(self, vs: Optional[Sequence[Term]] = None) -> Iterator[Dict[Term, Term]]:
        """Assignments of the variables to abducibles making the set satisfiable.

        Only class representatives are used as values; any other abducible is
        equivalent to its representative under this set.
        """
        vs = list(self.variables() if vs is None else vs)
        values = self.values()
        lits = list(self.diseqs) + list(self.preds)
        # for each variable, the literals whose last unassigned variable it is
        order = {v: i for i, v in enumerate(vs)}
        checks: List[List[Literal]] = [[] for _ in vs]
        ground_lits = []
        for lit in lits:
            lv = [order[v] for v in lit.variables() if v in order]
            if lv:
                checks[max(lv)].append(lit)
            else:
                ground_lits.append(lit)
        sigma: Dict[Term, Term] = {}

        def ok(i: int) -> bool:
            for lit in checks[i]:
                if lit.left.is_predicate_atom:
                    continue
                if apply(lit.left, sigma) is apply(lit.right, sigma):
                    return False
            return True

        def preds_ok() -> bool:
            pol: Dict[Term, bool] = {}
            for p in self.preds:
                a = apply(p.left, sigma)
                if pol.setdefault(a, p.positive) != p.positive:
                    return False
            return True

        def search(i: int) -> Iterator[Dict[Term, Term]]:
            if i == len(vs):
                if preds_ok():
                    yield dict(sigma)
                return
            for val in values:
                sigma[vs[i]] = val
                if ok(i):
                    yield from search(i + 1)
            sigma.pop(vs[i], None)

        if any(d.left is d.right for d in ground_lits if not d.left.is_predicate_atom):
            return iter(())
        return search(0)

    def instances(self) -> Iterator[Tuple[Dict[Term, Term], "ASet"]]:
        """Satisfiable ground instances ``(sigma, X sigma)``."""
        if not self.variables():
            if self.satisfiable():
                yield {}, self
            return
        for sigma in self.solutions():
            yield sigma, self.apply(sigma)


def partitions(items: Sequence[Term]) -> Iterator[List[List[Term]]]:
    """Set partitions of ``items`` in restricted-growth-string order."""
    n = len(items)
    if n == 0:
        yield []
        return
    codes = [0] * n

    def rec(i: int, top: int) -> Iterator[List[List[Term]]]:
        if i == n:
            blocks: List[List[Term]] = [[] for _ in range(top + 1)]
            for item, c in zip(items, codes):
                blocks[c].append(item)
            yield blocks
            return
        for c in range(top + 2):
            codes[i] = c
            yield from rec(i + 1, max(top, c))

    codes[0] = 0
    yield from rec(1, 0)


def complete_extensions(x: ASet, predicates: Sequence[Symbol] = ()) -> Iterator[ASet]:
    """All complete satisfiable ground A-sets extending the ground set ``x``."""
    if not x.ground:
        raise ValueError("complete extensions are defined for ground A-sets only")
    if not x.satisfiable():
        return
    reps = x.values()
    for blocks in partitions(reps):
        eqs = [Literal(b, blk[0], True) for blk in blocks for b in blk[1:]]
        try:
            base = x.add(eqs)
        except NotFlat:  # pragma: no cover - eqs are ground and flat
            continue
        if not base.satisfiable():
            continue
        classes = base.values()
        diseqs = [Literal.make(a, b, False) for a, b in itertools.combinations(classes, 2)]
        base = base.add(diseqs)
        atoms = [
            app(p, *args) for p in predicates for args in itertools.product(classes, repeat=p.arity)
        ]
        fixed = {lit.left: lit.positive for lit in base.preds}
        free = [a for a in atoms if a not in fixed]
        for bits in itertools.product((True, False), repeat=len(free)):
            lits = [Literal.make(a, TRUE, b) for a, b in zip(free, bits)]
            yield base.add(lits)

