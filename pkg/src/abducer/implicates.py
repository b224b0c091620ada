"""Implicate extraction, ground flat entailment and minimization."""

from __future__ import annotations

from typing import TYPE_CHECKING, Dict, Iterable, List, Optional, Sequence, Set

from .terms import Clause, Literal, Term, app

if TYPE_CHECKING:
    from .calculus import AClause
    from .ordering import Ordering


class NotImplicate(ValueError):
    pass


def check_implicate(c: Clause) -> Clause:
    """Assert that ``c`` is ground, A-flat and not a tautology."""
    seen: Dict[tuple, bool] = {}
    for lit in c:
        if not lit.ground or not lit.is_flat():
            raise NotImplicate(f"{lit} is not a ground flat literal")
        if lit.positive and lit.left is lit.right:
            raise NotImplicate(f"{c} is a tautology")
        if seen.setdefault((lit.left, lit.right), lit.positive) != lit.positive:
            raise NotImplicate(f"{c} is a tautology")
    return c


def extract(clauses: Iterable["AClause"]) -> List[Clause]:
    """Ground implicates ``(X sigma)^c`` from every ``[] | X`` clause, deduplicated."""
    out: Dict[Clause, None] = {}
    for c in clauses:
        if not c.is_empty:
            continue
        for _, xs in c.constraint.instances():
            out[check_implicate(xs.complement())] = None
    return list(out)


# --- ground consistency of flat unit sets ----------------------------------------


class _Units:
    """Union-find over constants with predicate atoms read modulo the classes."""

    def __init__(self) -> None:
        self.parent: Dict[Term, Term] = {}

    def find(self, a: Term) -> Term:
        p = self.parent.get(a, a)
        if p is a:
            return a
        r = self.find(p)
        self.parent[a] = r
        return r

    def union(self, a: Term, b: Term) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra is not rb:
            if rb.key < ra.key:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def atom(self, t: Term) -> Term:
        return app(t.head, *(self.find(a) for a in t.args))  # type: ignore[arg-type]


def consistent(units: Iterable[Literal]) -> bool:
    """Is a set of ground flat literals satisfiable?"""
    units = list(units)
    uf = _Units()
    for lit in units:
        if lit.positive and not lit.left.is_predicate_atom:
            uf.union(lit.left, lit.right)
    pol: Dict[Term, bool] = {}
    for lit in units:
        if lit.left.is_predicate_atom:
            if pol.setdefault(uf.atom(lit.left), lit.positive) != lit.positive:
                return False
        elif not lit.positive and uf.find(lit.left) is uf.find(lit.right):
            return False
    return True


def entails_ground(c: Clause, d: Clause) -> bool:
    """``C |= D`` for ground flat clauses."""
    dc = [lit.complement() for lit in d]
    return all(not consistent([lit] + dc) for lit in c)


def entails_set(s: Sequence[Clause], d: Clause) -> bool:
    """``S |= D`` for a set of ground flat clauses, by splitting on clause literals."""
    units = [lit.complement() for lit in d]
    return not _sat(units, list(s))


def _sat(units: List[Literal], clauses: List[Clause]) -> bool:
    if not consistent(units):
        return False
    pending = []
    for c in clauses:
        open_lits = [lit for lit in c if consistent(units + [lit])]
        if not open_lits:
            return False
        if any(not consistent(units + [lit.complement()]) for lit in open_lits):
            continue  # already satisfied
        pending.append(open_lits)
    if not pending:
        return True
    pending.sort(key=len)
    first = pending[0]
    rest = [Clause(p) for p in pending[1:]]
    for lit in first:
        if _sat(units + [lit], rest):
            return True
    return False


# --- minimization and rendering -----------------------------------------------


def render_literal(lit: Literal, ordering: Optional["Ordering"] = None) -> str:
    if lit.left.is_predicate_atom:
        return str(lit.left) if lit.positive else f"~{lit.left}"
    l, r = lit.left, lit.right
    if ordering is not None:
        from .ordering import Order

        if ordering.compare(l, r) is Order.LT:
            l, r = r, l
    op = "=" if lit.positive else "!="
    return f"{l} {op} {r}"


def sort_literals(c: Iterable[Literal], ordering: Optional["Ordering"] = None) -> List[Literal]:
    lits = list(c)
    if ordering is None:
        return sorted(lits, key=lambda lit: lit.sort_key)
    import functools

    from .ordering import Order

    def cmp(a: Literal, b: Literal) -> int:
        r = ordering.compare_literals(a, b)
        if r is Order.LT:
            return -1
        if r is Order.GT:
            return 1
        return (a.sort_key > b.sort_key) - (a.sort_key < b.sort_key)

    return sorted(lits, key=functools.cmp_to_key(cmp))


def render(c: Clause, ordering: Optional["Ordering"] = None) -> str:
    if not c:
        return "[]"
    return " | ".join(render_literal(lit, ordering) for lit in sort_literals(c, ordering))


def render_all(cs: Iterable[Clause], ordering: Optional["Ordering"] = None) -> List[str]:
    return sorted(render(c, ordering) for c in cs)


def minimize(impls: Iterable[Clause], ordering: Optional["Ordering"] = None) -> List[Clause]:
    """One representative per equivalence class of the entailment-strongest implicates."""
    items = list(dict.fromkeys(impls))
    # shortest first, so a representative is found before its longer variants
    items.sort(key=lambda c: (len(c), render(c, ordering)))
    kept: List[Clause] = []
    for c in items:
        if any(entails_ground(k, c) for k in kept):
            continue
        kept = [k for k in kept if not entails_ground(c, k)]
        kept.append(c)
    return sorted(kept, key=lambda c: render(c, ordering))


def equivalent_sets(xs: Sequence[Clause], ys: Sequence[Clause]) -> bool:
    """Every element of each set is entailed by some element of the other."""
    return all(any(entails_ground(y, x) for y in ys) for x in xs) and all(
        any(entails_ground(x, y) for x in xs) for y in ys
    )
