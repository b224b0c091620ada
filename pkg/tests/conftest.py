import re
from typing import Dict, List, Optional, Sequence

import pytest

from abducer.aset import ASet
from abducer.calculus import AClause, Calculus, normalize
from abducer.ordering import Ordering, OrderingConfig
from abducer.terms import TRUE, Clause, Kind, Literal, Signature, Symbol, Term, app, var

_TOK = re.compile(r"\s*([A-Za-z0-9_]+|[(),])")


class World:
    """A small signature with helpers to write terms, literals and clauses as text."""

    def __init__(
        self,
        abducibles: str = "a b c",
        functions: Optional[Dict[str, int]] = None,
        predicates: Optional[Dict[str, int]] = None,
        precedence: Sequence[str] = (),
    ) -> None:
        self.sig = Signature()
        names = abducibles.split()
        for i, n in enumerate(names):
            self.sig.add(Symbol(n, 0, Kind.ABDUCIBLE, rank=len(names) - 1 - i))
        for n, k in (functions or {}).items():
            self.sig.add(Symbol(n, k, Kind.FUNCTION))
        for n, k in (predicates or {}).items():
            self.sig.add(Symbol(n, k, Kind.PREDICATE))
        self.ordering = Ordering(OrderingConfig.default(self.sig, precedence=list(precedence)))
        self.abducibles = self.sig.abducible_terms()
        self.calc = Calculus(self.ordering, tuple(self.abducibles), tuple(self.sig.predicates))

    def t(self, text: str) -> Term:
        toks = _TOK.findall(text)
        pos = 0

        def term() -> Term:
            nonlocal pos
            name = toks[pos]
            pos += 1
            if pos < len(toks) and toks[pos] == "(":
                pos += 1
                args = [term()]
                while toks[pos] == ",":
                    pos += 1
                    args.append(term())
                assert toks[pos] == ")"
                pos += 1
                return app(self.sig[name], *args)
            if name[0].isupper():
                return var(name)
            return app(self.sig[name])

        out = term()
        assert pos == len(toks), text
        return out

    def lit(self, text: str) -> Literal:
        text = text.strip()
        if "!=" in text:
            l, r = text.split("!=")
            return Literal.make(self.t(l), self.t(r), False)
        if "=" in text:
            l, r = text.split("=")
            return Literal.make(self.t(l), self.t(r), True)
        if text.startswith("~"):
            return Literal(self.t(text[1:]), TRUE, False)
        return Literal(self.t(text), TRUE, True)

    def lits(self, text: str) -> List[Literal]:
        return [self.lit(p) for p in text.split("|")] if text.strip() else []

    def clause(self, text: str) -> Clause:
        return Clause(self.lits(text))

    def aset(self, text: str = "") -> ASet:
        # members separated by ";"
        return ASet.of(self.abducibles, self.lits(text.replace(";", "|")) if text.strip() else [])

    def ac(self, clause: str, constraint: str = "", ident: int = 0) -> AClause:
        return normalize(self.lits(clause), self.aset(constraint)).with_id(ident)


@pytest.fixture
def world() -> World:
    return World(functions={"f": 1, "g": 1, "h": 2})


def term_strategy(w: World, variables: Sequence[str] = ("X", "Y"), max_leaves: int = 6):
    """Hypothesis strategy for terms over the function symbols and abducibles of ``w``."""
    from hypothesis import strategies as st

    leaves = [st.just(a) for a in w.abducibles] + [st.just(var(v)) for v in variables]
    funcs = [s for s in w.sig.functions]

    def extend(children):
        return st.one_of(
            [st.tuples(*([children] * f.arity)).map(lambda args, f=f: app(f, *args)) for f in funcs]
        )

    return st.recursive(st.one_of(leaves), extend, max_leaves=max_leaves)


def collapse_maps(w: World) -> List[ASet]:
    """Every identification of abducibles, as positive A-sets (each class reduces to its least member)."""
    from abducer.aset import partitions

    out = []
    for blocks in partitions(w.abducibles):
        eqs = [Literal.make(b[0], x, True) for b in blocks for x in b[1:]]
        out.append(ASet.of(w.abducibles, eqs))
    return out


def ground_kbo(w: World, s: Term, t: Term) -> int:
    """Reference comparison of ground function terms: 1, 0 or -1."""
    cfg = w.ordering.config

    def weight(u: Term) -> int:
        return cfg.weight_of(u.head) + sum(weight(a) for a in u.args)

    def rank(u: Term):
        return (cfg.precedence[u.head.name], u.head.name)

    if s is t:
        return 0
    ws, wt = weight(s), weight(t)
    if ws != wt:
        return 1 if ws > wt else -1
    if rank(s) != rank(t):
        return 1 if rank(s) > rank(t) else -1
    for x, y in zip(s.args, t.args):
        r = ground_kbo(w, x, y)
        if r:
            return r
    return 0


# acceptance criteria report: one line per criterion, printed after the run
ACCEPTANCE: Dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(re.match(r"\d+", k).group()), k)):
        terminalreporter.write_line(ACCEPTANCE[key])
