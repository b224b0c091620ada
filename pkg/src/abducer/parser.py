"""Reader and writer for the problem file format.

    % comment
    abducibles a, b, c;
    predicate leq/2;
    weight f = 2;
    precedence g, f;
    clause g(f(X)) = d | ~leq(X, a);

Identifiers starting with an uppercase letter are variables.  Bare atoms
denote predicates; undeclared ones are declared on first use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .ordering import OrderingConfig
from .terms import TRUE, Kind, Literal, Signature, Symbol, Term, app, var


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


_TOKEN = re.compile(r"\s+|%[^\n]*|!=|[A-Za-z0-9_]+|[(),;|=~/]")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        s = m.group()
        if not (s[0].isspace() or s[0] == "%"):
            toks.append(_Tok(s, line, pos - line_start + 1))
        for k, ch in enumerate(s):
            if ch == "\n":
                line += 1
                line_start = pos + k + 1
        pos = m.end()
    return toks


# raw syntax trees: (name, args, token) for terms; (kind, payload, token) for literals
_RawTerm = Tuple[str, Optional[list], _Tok]


@dataclass
class _RawLit:
    kind: str  # "eq", "neq", "atom"
    left: _RawTerm
    right: Optional[_RawTerm]
    positive: bool
    tok: _Tok


class _Reader:
    def __init__(self, toks: List[_Tok]) -> None:
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else _Tok("", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def ident(self) -> _Tok:
        t = self.next()
        if not re.fullmatch(r"[A-Za-z0-9_]+", t.text):
            raise ParseError(f"expected identifier, found {t.text!r}", t.line, t.col)
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def term(self) -> _RawTerm:
        t = self.ident()
        if self.at("("):
            self.next()
            args = [self.term()]
            while self.at(","):
                self.next()
                args.append(self.term())
            self.expect(")")
            return (t.text, args, t)
        return (t.text, None, t)

    def literal(self) -> _RawLit:
        first = self.peek()
        if first is not None and first.text == "~":
            self.next()
            return _RawLit("atom", self.term(), None, False, first)
        left = self.term()
        if self.at("="):
            self.next()
            return _RawLit("eq", left, self.term(), True, left[2])
        if self.at("!="):
            self.next()
            return _RawLit("eq", left, self.term(), False, left[2])
        return _RawLit("atom", left, None, True, left[2])


@dataclass
class Problem:
    signature: Signature
    clauses: List[List[Literal]]
    weights: Dict[str, int] = field(default_factory=dict)
    precedence: List[str] = field(default_factory=list)

    @property
    def abducibles(self) -> List[Term]:
        return self.signature.abducible_terms()

    @property
    def predicates(self) -> List[Symbol]:
        return self.signature.predicates

    def ordering_config(self) -> OrderingConfig:
        return OrderingConfig.default(self.signature, self.weights, self.precedence)

    @property
    def ground(self) -> bool:
        return all(lit.ground for c in self.clauses for lit in c)


def _is_var(name: str) -> bool:
    return name[0].isupper()


def parse(text: str) -> Problem:
    r = _Reader(_tokenize(text))
    abducibles: List[_Tok] = []
    pred_decls: List[Tuple[_Tok, int]] = []
    raw_clauses: List[Tuple[_Tok, List[_RawLit]]] = []
    weights: Dict[str, int] = {}
    precedence: List[str] = []
    while r.peek() is not None:
        kw = r.ident()
        if kw.text == "abducibles":
            abducibles.append(r.ident())
            while r.at(","):
                r.next()
                abducibles.append(r.ident())
        elif kw.text == "predicate":
            name = r.ident()
            r.expect("/")
            pred_decls.append((name, _int(r.ident())))
        elif kw.text == "clause":
            lits = [r.literal()]
            while r.at("|"):
                r.next()
                lits.append(r.literal())
            raw_clauses.append((kw, lits))
        elif kw.text == "weight":
            name = r.ident()
            r.expect("=")
            weights[name.text] = _int(r.ident())
        elif kw.text == "precedence":
            precedence.append(r.ident().text)
            while r.at(","):
                r.next()
                precedence.append(r.ident().text)
        else:
            raise ParseError(f"unknown statement {kw.text!r}", kw.line, kw.col)
        r.expect(";")
    return _build(abducibles, pred_decls, raw_clauses, weights, precedence)


def _int(tok: _Tok) -> int:
    if not tok.text.isdigit():
        raise ParseError(f"expected a number, found {tok.text!r}", tok.line, tok.col)
    return int(tok.text)


def _build(
    abducibles: List[_Tok],
    pred_decls: List[Tuple[_Tok, int]],
    raw_clauses: List[Tuple[_Tok, List[_RawLit]]],
    weights: Dict[str, int],
    precedence: List[str],
) -> Problem:
    sig = Signature()
    kinds: Dict[str, Tuple[Kind, int]] = {}
    order: List[str] = []

    def declare(name: str, kind: Kind, arity: int, tok: _Tok) -> None:
        if _is_var(name):
            raise ParseError(f"{name} is a variable name", tok.line, tok.col)
        if name == TRUE.head.name:  # type: ignore[union-attr]
            raise ParseError(f"{name} is reserved", tok.line, tok.col)
        old = kinds.get(name)
        if old is None:
            kinds[name] = (kind, arity)
            order.append(name)
            return
        if old[1] != arity:
            raise ParseError(f"arity conflict for {name}: {old[1]} vs {arity}", tok.line, tok.col)
        if old[0] is not kind:
            if Kind.PREDICATE in (old[0], kind):
                raise ParseError(f"{name} used both as predicate and as term", tok.line, tok.col)
            raise ParseError(f"{name} used both as {old[0].value} and {kind.value}", tok.line, tok.col)

    for tok in abducibles:
        if tok.text in kinds:
            raise ParseError(f"abducible {tok.text} declared twice", tok.line, tok.col)
        declare(tok.text, Kind.ABDUCIBLE, 0, tok)
    for tok, n in pred_decls:
        declare(tok.text, Kind.PREDICATE, n, tok)

    def scan_term(t: _RawTerm) -> None:
        name, args, tok = t
        if args is None and _is_var(name):
            return
        if args is not None and _is_var(name):
            raise ParseError(f"variable {name} applied to arguments", tok.line, tok.col)
        arity = len(args) if args else 0
        if kinds.get(name) == (Kind.ABDUCIBLE, 0) and not args:
            return
        if name in kinds and kinds[name][0] is Kind.PREDICATE:
            raise ParseError(f"predicate {name} below a function symbol or in an equation", tok.line, tok.col)
        declare(name, Kind.FUNCTION, arity, tok)
        for a in args or []:
            scan_term(a)

    for _, lits in raw_clauses:
        for lit in lits:
            if lit.kind == "atom":
                name, args, tok = lit.left
                if _is_var(name):
                    raise ParseError(f"variable {name} used as an atom", tok.line, tok.col)
                declare(name, Kind.PREDICATE, len(args or []), tok)
                for a in args or []:
                    scan_term(a)
            else:
                scan_term(lit.left)
                assert lit.right is not None
                scan_term(lit.right)

    n_abd = len(abducibles)
    for i, tok in enumerate(abducibles):
        sig.add(Symbol(tok.text, 0, Kind.ABDUCIBLE, rank=n_abd - 1 - i))
    for name in order:
        kind, arity = kinds[name]
        if kind is not Kind.ABDUCIBLE:
            sig.add(Symbol(name, arity, kind))

    def build(t: _RawTerm) -> Term:
        name, args, _ = t
        if args is None and _is_var(name):
            return var(name)
        return app(sig[name], *(build(a) for a in args or []))

    clauses: List[List[Literal]] = []
    for _, lits in raw_clauses:
        out = []
        for lit in lits:
            if lit.kind == "atom":
                out.append(Literal(build(lit.left), TRUE, lit.positive))
            else:
                assert lit.right is not None
                out.append(Literal.make(build(lit.left), build(lit.right), lit.positive))
        clauses.append(out)
    for name in list(weights) + precedence:
        if name not in sig:
            raise ParseError(f"ordering refers to unknown symbol {name}")
    problem = Problem(sig, clauses, weights, precedence)
    try:
        problem.ordering_config()
    except ValueError as e:
        raise ParseError(str(e)) from e
    return problem


def render_term(t: Term) -> str:
    return str(t)


def render_literal(lit: Literal) -> str:
    return str(lit)


def render(p: Problem) -> str:
    lines = []
    abd = sorted(p.signature.abducibles, key=lambda s: -s.rank)
    if abd:
        lines.append("abducibles " + ", ".join(s.name for s in abd) + ";")
    for s in p.signature.predicates:
        lines.append(f"predicate {s.name}/{s.arity};")
    for name, w in p.weights.items():
        lines.append(f"weight {name} = {w};")
    # an explicit precedence keeps the ordering stable across a round trip
    cfg = p.ordering_config()
    names = [s.name for s in p.signature.symbols.values() if s.kind in (Kind.FUNCTION, Kind.PREDICATE)]
    if len(names) > 1:
        names.sort(key=lambda n: -cfg.precedence[n])
        lines.append("precedence " + ", ".join(names) + ";")
    for c in p.clauses:
        lines.append("clause " + " | ".join(render_literal(lit) for lit in c) + ";")
    return "\n".join(lines) + "\n"
