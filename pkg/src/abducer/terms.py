"""Terms, literals, clauses and substitutions.

Terms are hash-consed: building the same term twice returns the same object,
so structural equality is identity and hashing is cheap.  Predicate atoms are
encoded as ``p(t1, ..., tn) = TRUE``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Tuple

Position = Tuple[int, ...]


class Kind(enum.Enum):
    FUNCTION = "function"
    PREDICATE = "predicate"
    ABDUCIBLE = "abducible"
    TRUE = "true"


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: Kind
    # position among abducibles in ascending precedence; the representative of
    # an equivalence class of abducibles is the one with the smallest rank
    rank: int = 0

    def __post_init__(self) -> None:
        if self.kind in (Kind.ABDUCIBLE, Kind.TRUE) and self.arity != 0:
            raise ValueError(f"{self.kind.value} symbol {self.name} must be a constant")

    @property
    def is_predicate(self) -> bool:
        return self.kind is Kind.PREDICATE

    @property
    def is_abducible(self) -> bool:
        return self.kind is Kind.ABDUCIBLE


TRUE_SYMBOL = Symbol("$true", 0, Kind.TRUE)


class Term:
    """An interned first-order term.  Do not instantiate directly."""

    __slots__ = ("head", "args", "name", "is_var", "ground", "size", "varcounts", "key", "__weakref__")

    head: Optional[Symbol]
    args: Tuple["Term", ...]
    name: str
    is_var: bool
    ground: bool
    size: int
    varcounts: Mapping["Term", int]
    key: str

    def __repr__(self) -> str:
        return self.key

    __str__ = __repr__

    def __lt__(self, other: "Term") -> bool:
        return self.key < other.key

    @property
    def is_abducible(self) -> bool:
        return self.head is not None and self.head.kind is Kind.ABDUCIBLE

    @property
    def is_true(self) -> bool:
        return self.head is TRUE_SYMBOL

    @property
    def is_predicate_atom(self) -> bool:
        return self.head is not None and self.head.kind is Kind.PREDICATE

    @property
    def is_flat_arg(self) -> bool:
        """True for variables and abducible constants."""
        return self.is_var or self.is_abducible

    def variables(self) -> List["Term"]:
        return list(self.varcounts)

    def subterms(self) -> Iterator[Tuple[Position, "Term"]]:
        """Yield ``(position, subterm)`` pairs in pre-order."""
        stack: List[Tuple[Position, Term]] = [((), self)]
        while stack:
            pos, t = stack.pop()
            yield pos, t
            for i in range(len(t.args), 0, -1):
                stack.append((pos + (i,), t.args[i - 1]))


_TABLE: Dict[tuple, Term] = {}
_EMPTY: Mapping[Term, int] = {}


def _intern(key: tuple, head: Optional[Symbol], args: Tuple[Term, ...], name: str) -> Term:
    t = _TABLE.get(key)
    if t is not None:
        return t
    t = object.__new__(Term)
    t.head = head
    t.args = args
    t.name = name
    t.is_var = head is None
    if head is None:
        t.ground = False
        t.size = 1
        t.varcounts = {t: 1}
        t.key = name
    else:
        t.ground = all(a.ground for a in args)
        t.size = 1 + sum(a.size for a in args)
        if t.ground:
            t.varcounts = _EMPTY
        else:
            counts: Dict[Term, int] = {}
            for a in args:
                for v, n in a.varcounts.items():
                    counts[v] = counts.get(v, 0) + n
            t.varcounts = counts
        if args:
            t.key = f"{head.name}({','.join(a.key for a in args)})"
        else:
            t.key = head.name
    _TABLE[key] = t
    return t


def var(name: str) -> Term:
    return _intern(("?", name), None, (), name)


def app(head: Symbol, *args: Term) -> Term:
    if len(args) != head.arity:
        raise ValueError(f"{head.name} expects {head.arity} arguments, got {len(args)}")
    for a in args:
        if a.head is not None and a.head.kind in (Kind.PREDICATE, Kind.TRUE):
            raise ValueError(f"predicate term {a} below function symbol {head.name}")
    return _intern((head, args), head, tuple(args), head.name)


TRUE = app(TRUE_SYMBOL)


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not 1 <= i <= len(t.args):
            raise InvalidPosition(f"position {p} does not occur in {t}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    i = p[0]
    if not 1 <= i <= len(t.args):
        raise InvalidPosition(f"position {p} does not occur in {t}")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], s)
    return app(t.head, *args)  # type: ignore[arg-type]


class InvalidPosition(ValueError):
    pass


# --- substitutions ---------------------------------------------------------

Substitution = Mapping[Term, Term]


def apply(t: Term, sigma: Substitution) -> Term:
    if t.ground or not sigma:
        return t
    if t.is_var:
        return sigma.get(t, t)
    return app(t.head, *(apply(a, sigma) for a in t.args))  # type: ignore[arg-type]


def occurs(x: Term, t: Term) -> bool:
    return x in t.varcounts


# --- literals and clauses --------------------------------------------------


class Literal(NamedTuple):
    left: Term
    right: Term
    positive: bool

    @staticmethod
    def make(t: Term, s: Term, positive: bool = True) -> "Literal":
        """Canonical literal for ``t = s`` (or ``t != s``).

        Predicate atoms always sit on the left with TRUE on the right; other
        pairs are ordered by their printed key.
        """
        if s.is_predicate_atom or (t.is_true and not s.is_true):
            t, s = s, t
        if t.is_predicate_atom:
            if not s.is_true:
                raise ValueError(f"predicate atom {t} may only be equated with TRUE")
            return Literal(t, s, positive)
        if s.is_predicate_atom:
            raise ValueError(f"predicate atom {s} may only be equated with TRUE")
        if s.key < t.key:
            t, s = s, t
        return Literal(t, s, positive)

    @property
    def is_predicate(self) -> bool:
        return self.left.is_predicate_atom

    def complement(self) -> "Literal":
        return Literal(self.left, self.right, not self.positive)

    def apply(self, sigma: Substitution) -> "Literal":
        if not sigma:
            return self
        return Literal.make(apply(self.left, sigma), apply(self.right, sigma), self.positive)

    def is_flat(self) -> bool:
        """A-flat: both sides variables/abducibles, or a predicate atom over such."""
        if self.left.is_predicate_atom:
            return all(a.is_flat_arg for a in self.left.args)
        return self.left.is_flat_arg and self.right.is_flat_arg

    def is_trivial_true(self) -> bool:
        return self.positive and self.left is self.right

    def is_trivial_false(self) -> bool:
        return not self.positive and self.left is self.right

    def variables(self) -> Iterator[Term]:
        yield from self.left.varcounts
        for v in self.right.varcounts:
            if v not in self.left.varcounts:
                yield v

    @property
    def ground(self) -> bool:
        return self.left.ground and self.right.ground

    @property
    def size(self) -> int:
        return self.left.size + (0 if self.right.is_true else self.right.size)

    @property
    def sort_key(self) -> Tuple[str, str, bool]:
        return (self.left.key, self.right.key, self.positive)

    def __str__(self) -> str:
        if self.left.is_predicate_atom:
            return str(self.left) if self.positive else f"~{self.left}"
        op = "=" if self.positive else "!="
        return f"{self.left} {op} {self.right}"

    __repr__ = __str__


def eq(t: Term, s: Term) -> Literal:
    return Literal.make(t, s, True)


def neq(t: Term, s: Term) -> Literal:
    return Literal.make(t, s, False)


def atom(t: Term, positive: bool = True) -> Literal:
    return Literal.make(t, TRUE, positive)


class Clause(tuple):
    """A multiset of literals, stored as a sorted tuple."""

    def __new__(cls, literals: Iterable[Literal] = ()) -> "Clause":
        return super().__new__(cls, sorted(literals, key=_lit_key))

    @property
    def is_empty(self) -> bool:
        return not self

    def complement(self) -> List["Clause"]:
        return [Clause([lit.complement()]) for lit in self]

    def apply(self, sigma: Substitution) -> "Clause":
        if not sigma:
            return self
        return Clause(lit.apply(sigma) for lit in self)

    def without(self, index: int) -> List[Literal]:
        return [lit for i, lit in enumerate(self) if i != index]

    def variables(self) -> List[Term]:
        seen: Dict[Term, None] = {}
        for lit in self:
            for v in lit.variables():
                seen[v] = None
        return list(seen)

    @property
    def ground(self) -> bool:
        return all(lit.ground for lit in self)

    @property
    def size(self) -> int:
        return sum(lit.size for lit in self)

    def __str__(self) -> str:
        return " | ".join(str(lit) for lit in self) if self else "[]"

    def __repr__(self) -> str:
        return f"Clause({self})"


def _lit_key(lit: Literal) -> Tuple[str, str, bool]:
    return (lit.left.key, lit.right.key, lit.positive)


def clause_from_complement(units: Iterable[Literal]) -> Clause:
    """``S^c`` for a set of unit literals."""
    return Clause(lit.complement() for lit in units)


# --- classification ---------------------------------------------------------


class Flatness(enum.Enum):
    A_FLAT = "A-flat"
    ELEMENTARY = "elementary"
    NEITHER = "neither"


def classify(clause: Iterable[Literal], abducibles: Optional[Iterable[Symbol]] = None) -> Flatness:
    """Classify a clause as elementary, A-flat, or neither.

    ``abducibles`` restricts the constants treated as abducible; by default
    the symbol kinds decide.
    """
    allowed = None if abducibles is None else {s.name for s in abducibles}

    def flat_arg(t: Term) -> bool:
        if t.is_var:
            return True
        if allowed is None:
            return t.is_abducible
        return not t.args and t.head is not None and t.head.name in allowed

    elementary = True
    for lit in clause:
        if lit.left.is_predicate_atom:
            elementary = False
            if not all(flat_arg(a) for a in lit.left.args):
                return Flatness.NEITHER
        elif not (flat_arg(lit.left) and flat_arg(lit.right)):
            return Flatness.NEITHER
    return Flatness.ELEMENTARY if elementary else Flatness.A_FLAT


def is_quasi_positive(clause: Iterable[Literal]) -> bool:
    return all(lit.positive or lit.left.is_predicate_atom for lit in clause)


# --- variable renaming ------------------------------------------------------


def renaming(variables: Iterable[Term], prefix: str) -> Dict[Term, Term]:
    sigma: Dict[Term, Term] = {}
    for i, v in enumerate(variables):
        w = var(f"{prefix}{i}")
        if w is not v:
            sigma[v] = w
    return sigma


@dataclass
class Signature:
    """Symbols of a problem, including the abducible constants and predicates."""

    symbols: Dict[str, Symbol] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.symbols.setdefault(TRUE_SYMBOL.name, TRUE_SYMBOL)

    def add(self, symbol: Symbol) -> Symbol:
        old = self.symbols.get(symbol.name)
        if old is not None:
            if old != symbol:
                raise ValueError(f"symbol {symbol.name} redeclared as {symbol.kind.value}/{symbol.arity}")
            return old
        self.symbols[symbol.name] = symbol
        return symbol

    def __getitem__(self, name: str) -> Symbol:
        return self.symbols[name]

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    @property
    def abducibles(self) -> List[Symbol]:
        """Abducible symbols, ordered by increasing rank."""
        return sorted((s for s in self.symbols.values() if s.is_abducible), key=lambda s: s.rank)

    @property
    def predicates(self) -> List[Symbol]:
        return [s for s in self.symbols.values() if s.is_predicate]

    @property
    def functions(self) -> List[Symbol]:
        return [s for s in self.symbols.values() if s.kind is Kind.FUNCTION]

    def const(self, name: str) -> Term:
        return app(self.symbols[name])

    def abducible_terms(self) -> List[Term]:
        return [app(s) for s in self.abducibles]
