"""Knuth-Bendix ordering, the abducible-safe comparison and literal selection.

Abducible constants are kept at the bottom of the precedence (just above
TRUE) with minimal weight, so every non-abducible term is greater than every
abducible.  Predicate atoms compare their argument multisets before the
predicate precedence, which gives ``q(t...) > p(a...)`` whenever some ``t_i``
exceeds all of the ``a_j``.

``approx=True`` turns the comparison into a sound test for "greater under
every abducible renaming": two distinct abducibles become incomparable, since
a constraint may identify them or order them either way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

from .terms import Clause, Kind, Literal, Signature, Symbol, Term, TRUE_SYMBOL


class Order(enum.Enum):
    GT = ">"
    LT = "<"
    EQ = "="
    NC = "?"

    def flip(self) -> "Order":
        return _FLIP[self]


_FLIP = {Order.GT: Order.LT, Order.LT: Order.GT, Order.EQ: Order.EQ, Order.NC: Order.NC}

GT, LT, EQ, NC = Order.GT, Order.LT, Order.EQ, Order.NC

T = TypeVar("T")


class OrderingError(ValueError):
    pass


@dataclass
class OrderingConfig:
    """KBO parameters.  ``precedence`` maps symbol names to ranks (higher is greater)."""

    weights: Dict[str, int] = field(default_factory=dict)
    precedence: Dict[str, int] = field(default_factory=dict)
    var_weight: int = 1

    @classmethod
    def default(
        cls,
        signature: Signature,
        weights: Optional[Dict[str, int]] = None,
        precedence: Optional[Sequence[str]] = None,
    ) -> "OrderingConfig":
        """Build a config honouring the abducible and TRUE constraints.

        Non-abducible symbols are ranked by ``precedence`` (greatest first) if
        given, then by declaration order, earlier being greater.  Abducibles
        are always below every other symbol, ordered by their rank.
        """
        weights = dict(weights or {})
        names = [s.name for s in signature.symbols.values() if s.kind in (Kind.FUNCTION, Kind.PREDICATE)]
        listed = list(precedence or [])
        for n in listed:
            if n not in signature or signature[n].kind not in (Kind.FUNCTION, Kind.PREDICATE):
                raise OrderingError(f"precedence lists unknown or abducible symbol {n}")
        ordered = listed + [n for n in names if n not in listed]
        prec: Dict[str, int] = {TRUE_SYMBOL.name: 0}
        abd = signature.abducibles
        for s in abd:
            prec[s.name] = 1 + s.rank
        top = 1 + len(abd)
        for i, n in enumerate(reversed(ordered)):
            prec[n] = top + i
        for s in abd:
            if weights.get(s.name, 1) != 1:
                raise OrderingError(f"abducible {s.name} must keep the minimal weight")
        cfg = cls(weights=weights, precedence=prec)
        cfg.validate(signature)
        return cfg

    def weight_of(self, sym: Symbol) -> int:
        if sym.kind is Kind.TRUE or sym.kind is Kind.ABDUCIBLE:
            return self.var_weight
        return self.weights.get(sym.name, self.var_weight)

    def validate(self, signature: Signature) -> None:
        w0 = self.var_weight
        if w0 <= 0:
            raise OrderingError("variable weight must be positive")
        top = max(self.precedence.values(), default=0)
        pred_weights = set()
        for s in signature.symbols.values():
            w = self.weight_of(s)
            if w < 0:
                raise OrderingError(f"negative weight for {s.name}")
            if s.arity == 0 and w < w0:
                raise OrderingError(f"constant {s.name} lighter than variables")
            if w == 0 and (s.arity != 1 or self.precedence.get(s.name) != top):
                raise OrderingError(f"weight 0 only allowed for the greatest unary symbol, not {s.name}")
            if s.is_predicate:
                pred_weights.add(w)
        if len(pred_weights) > 1:
            raise OrderingError("all predicate symbols must share one weight")


def multiset_compare(xs: Sequence[T], ys: Sequence[T], cmp: Callable[[T, T], Order]) -> Order:
    """Dershowitz-Manna extension of ``cmp``; equal elements must be identical."""
    xs = list(xs)
    ys = list(ys)
    rest = []
    for x in xs:
        for j, y in enumerate(ys):
            if cmp(x, y) is EQ:
                del ys[j]
                break
        else:
            rest.append(x)
    xs = rest
    if not xs and not ys:
        return EQ

    def dominates(big: List[T], small: List[T]) -> bool:
        return all(any(cmp(b, s) is GT for b in big) for s in small)

    if not ys:
        return GT
    if not xs:
        return LT
    if dominates(xs, ys):
        return GT
    if dominates(ys, xs):
        return LT
    return NC


class Ordering:
    """A KBO instance over a fixed signature."""

    def __init__(self, config: OrderingConfig) -> None:
        self.config = config
        self._weights: Dict[Term, int] = {}
        # terms are interned, so results can be cached by identity
        self._cmp: Dict[tuple, Order] = {}
        self._lit_cmp: Dict[tuple, Order] = {}
        self._sel: Dict[tuple, List[int]] = {}

    def weight(self, t: Term) -> int:
        w = self._weights.get(t)
        if w is None:
            if t.is_var:
                w = self.config.var_weight
            else:
                w = self.config.weight_of(t.head) + sum(self.weight(a) for a in t.args)  # type: ignore[arg-type]
            self._weights[t] = w
        return w

    def prec(self, s: Symbol) -> int:
        return self.config.precedence.get(s.name, 0)

    def compare(self, s: Term, t: Term, approx: bool = False) -> Order:
        if s is t:
            return EQ
        key = (s, t, approx)
        r = self._cmp.get(key)
        if r is None:
            r = self._cmp[key] = self._compare(s, t, approx)
        return r

    def _compare(self, s: Term, t: Term, approx: bool) -> Order:
        if t.is_true:
            return GT
        if s.is_true:
            return LT
        if s.is_var:
            return LT if s in t.varcounts else NC
        if t.is_var:
            return GT if t in s.varcounts else NC
        ws, wt = self.weight(s), self.weight(t)
        ge = all(n <= s.varcounts.get(v, 0) for v, n in t.varcounts.items())
        le = all(n <= t.varcounts.get(v, 0) for v, n in s.varcounts.items())
        if ws > wt:
            return GT if ge else NC
        if ws < wt:
            return LT if le else NC
        if not ge and not le:
            return NC
        r = self._tiebreak(s, t, approx)
        if r is GT:
            return GT if ge else NC
        if r is LT:
            return LT if le else NC
        return r

    def _tiebreak(self, s: Term, t: Term, approx: bool) -> Order:
        f, g = s.head, t.head
        assert f is not None and g is not None
        if f.is_predicate and g.is_predicate:
            r = multiset_compare(s.args, t.args, lambda x, y: self.compare(x, y, approx))
            if r is not EQ:
                return r
        if f != g:
            if approx and f.is_abducible and g.is_abducible:
                return NC
            pf, pg = self.prec(f), self.prec(g)
            if pf != pg:
                return GT if pf > pg else LT
            return GT if f.name > g.name else LT
        for a, b in zip(s.args, t.args):
            if a is not b:
                return self.compare(a, b, approx)
        return EQ

    def geq_a(self, t: Term, s: Term) -> bool:
        """Sound test for ``t >= s`` under every abducible renaming and grounding."""
        return t is s or s.is_true or self.compare(t, s, approx=True) is GT

    def gt_a(self, t: Term, s: Term) -> bool:
        return self.compare(t, s, approx=True) is GT

    # literals

    @staticmethod
    def _literal_multiset(lit: Literal) -> List[List[Term]]:
        if lit.positive:
            return [[lit.left], [lit.right]]
        return [[lit.left, lit.right]]

    def compare_literals(self, l1: Literal, l2: Literal, approx: bool = False) -> Order:
        key = (l1, l2, approx)
        r = self._lit_cmp.get(key)
        if r is None:
            r = self._lit_cmp[key] = self._compare_literals(l1, l2, approx)
        return r

    def _compare_literals(self, l1: Literal, l2: Literal, approx: bool) -> Order:
        def term_cmp(x: Term, y: Term) -> Order:
            return self.compare(x, y, approx)

        def ms_cmp(x: List[Term], y: List[Term]) -> Order:
            return multiset_compare(x, y, term_cmp)

        return multiset_compare(self._literal_multiset(l1), self._literal_multiset(l2), ms_cmp)

    def select(self, clause: Iterable[Literal]) -> List[int]:
        """Indices of selected literals.

        All negative literals if there are any; otherwise every positive
        literal not strictly dominated (under every abducible renaming) by
        another literal of the clause.
        """
        lits = tuple(clause)
        hit = self._sel.get(lits)
        if hit is None:
            hit = self._sel[lits] = self._select(lits)
        return list(hit)

    def _select(self, lits: Sequence[Literal]) -> List[int]:
        neg = [i for i, lit in enumerate(lits) if not lit.positive]
        if neg:
            return neg
        chosen = []
        for i, li in enumerate(lits):
            dominated = False
            for j, lj in enumerate(lits):
                if i != j and lj != li and self.compare_literals(lj, li, approx=True) is GT:
                    dominated = True
                    break
            if not dominated:
                chosen.append(i)
        return chosen

    def selected(self, clause: Clause) -> List[Literal]:
        return [clause[i] for i in self.select(clause)]

    def max_side(self, lit: Literal) -> List[tuple]:
        """Orientations ``(t, s)`` of ``lit`` with ``s`` not provably >= ``t``."""
        out = []
        if lit.left.is_predicate_atom:
            return [(lit.left, lit.right)]
        for t, s in ((lit.left, lit.right), (lit.right, lit.left)):
            if not self.geq_a(s, t):
                out.append((t, s))
        if lit.left is lit.right:
            return []
        return out
