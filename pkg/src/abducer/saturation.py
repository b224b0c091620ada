"""Given-clause saturation with SA / SAR modes, P-filters and resource limits."""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, TextIO, Tuple

from .aset import ASet
from .calculus import ASSERT, INPUT, AClause, Calculus, is_tautology, normalize, subsumes
from .implicates import entails_ground, entails_set, extract
from .ordering import Ordering
from .terms import Clause, Literal, Symbol, Term


class Mode(enum.Enum):
    SA = "sa"
    SAR = "sar"


class Status(enum.Enum):
    SATURATED = "saturated"
    LIMIT = "limit-reached"


class PFilter:
    """A class of clauses closed under subsumption, tested on ``X^c``."""

    name = "none"

    def accepts(self, x: ASet) -> bool:
        return True

    def __repr__(self) -> str:
        return self.name


class MaxLiterals(PFilter):
    def __init__(self, k: int) -> None:
        if k < 0:
            raise ValueError("literal bound must be non-negative")
        self.k = k
        self.name = f"maxlits={k}"

    def accepts(self, x: ASet) -> bool:
        # identifying every variable gives the shortest instance
        vs = x.variables()
        if vs:
            x = x.apply({v: vs[0] for v in vs})
        return len(x) <= self.k


class PositiveOnly(PFilter):
    name = "positive"

    def accepts(self, x: ASet) -> bool:
        return not x.rep and all(not p.positive for p in x.preds)


class NegativeOnly(PFilter):
    name = "negative"

    def accepts(self, x: ASet) -> bool:
        return not x.diseqs and all(p.positive for p in x.preds)


class EntailsOneOf(PFilter):
    """Clauses entailing at least one member of a fixed ground clause set."""

    name = "entails-one-of"

    def __init__(self, targets: Iterable[Clause]) -> None:
        self.targets = list(targets)
        self._cache: Dict[ASet, bool] = {}

    def accepts(self, x: ASet) -> bool:
        r = self._cache.get(x)
        if r is None:
            r = self._cache[x] = self._accepts(x)
        return r

    def _accepts(self, x: ASet) -> bool:
        if x.ground:
            c = x.complement()
            return any(entails_ground(c, d) for d in self.targets)
        instances = [xs.complement() for _, xs in x.instances()]
        if not instances:
            return True
        return any(entails_set(instances, d) for d in self.targets)


class AllOf(PFilter):
    def __init__(self, *filters: PFilter) -> None:
        self.filters = filters
        self.name = "+".join(f.name for f in filters)

    def accepts(self, x: ASet) -> bool:
        return all(f.accepts(x) for f in self.filters)


def parse_filter(text: str) -> PFilter:
    text = text.strip()
    if text == "none":
        return PFilter()
    if text == "positive":
        return PositiveOnly()
    if text == "negative":
        return NegativeOnly()
    if text.startswith("maxlits="):
        return MaxLiterals(int(text.split("=", 1)[1]))
    raise ValueError(f"unknown filter {text!r}")


@dataclass
class Limits:
    max_clauses: int = 100000
    max_weight: int = 60
    max_iterations: int = 200000
    weight_ratio: int = 4

    def __post_init__(self) -> None:
        if self.weight_ratio < 0:
            raise ValueError("weight ratio must be non-negative")
        if min(self.max_clauses, self.max_weight, self.max_iterations) <= 0:
            raise ValueError("limits must be positive")


@dataclass
class SaturationConfig:
    mode: Mode = Mode.SA
    filter: PFilter = field(default_factory=PFilter)
    limits: Limits = field(default_factory=Limits)


@dataclass
class SaturationResult:
    clauses: List[AClause]
    status: Status
    generated: int = 0
    iterations: int = 0

    def empty_clauses(self) -> List[AClause]:
        return [c for c in self.clauses if c.is_empty]


class _Trace:
    def __init__(self, out: Optional[TextIO]) -> None:
        self.out = out

    def emit(self, event: str, c: AClause) -> None:
        if self.out is None:
            return
        parents = ",".join(str(p) for p in c.parents) or "-"
        self.out.write(f"event={event} id={c.id} rule={c.rule} parents={parents} clause={c}\n")


class Saturator:
    """One saturation run.  Not reusable."""

    def __init__(self, calculus: Calculus, config: SaturationConfig, trace: Optional[TextIO] = None) -> None:
        self.calc = calculus
        self.config = config
        self.trace = _Trace(trace)
        self.next_id = 1
        self.active: List[AClause] = []
        self.passive: Dict[int, AClause] = {}
        self._by_age: List[Tuple[int, int]] = []
        self._by_weight: List[Tuple[int, int]] = []
        self._seen: Set[Tuple[Clause, ASet]] = set()
        # subsumption index: a ground clause part can only subsume clauses containing its first literal
        self._index: Dict[object, Dict[int, AClause]] = {}
        self.limit_hit = False
        self.generated = 0
        self.iterations = 0

    # bookkeeping

    @staticmethod
    def _key(c: AClause) -> object:
        if not c.clause:
            return ""
        if not c.clause.ground:
            return "*"
        return c.clause[0]

    def _index_add(self, c: AClause) -> None:
        self._index.setdefault(self._key(c), {})[c.id] = c

    def _index_drop(self, c: AClause) -> None:
        self._index.get(self._key(c), {}).pop(c.id, None)

    def _candidates(self, c: AClause) -> Iterable[AClause]:
        keys: List[object] = ["", "*"]
        if c.clause.ground:
            keys.extend(dict.fromkeys(c.clause))
        else:
            keys.extend(k for k in self._index if k not in ("", "*"))
        for k in keys:
            bucket = self._index.get(k)
            if bucket:
                yield from list(bucket.values())

    def _store(self, c: AClause) -> AClause:
        c = c.with_id(self.next_id)
        self.next_id += 1
        self.passive[c.id] = c
        heapq.heappush(self._by_age, (c.id, c.id))
        heapq.heappush(self._by_weight, (c.weight, c.id))
        self._seen.add((c.clause, c.constraint))
        self._index_add(c)
        return c

    def _pop(self, pick_light: bool) -> Optional[AClause]:
        heap = self._by_weight if pick_light else self._by_age
        while heap:
            _, ident = heapq.heappop(heap)
            c = self.passive.pop(ident, None)
            if c is not None:
                return c
        return None

    def _redundant(self, c: AClause) -> bool:
        if (c.clause, c.constraint) in self._seen:
            return True
        return any(subsumes(d, c) for d in self._candidates(c))

    def _consider(self, c: AClause) -> None:
        self.generated += 1
        if (c.clause, c.constraint) in self._seen:
            return
        if is_tautology(c):
            return
        if c.rule != INPUT and not self.config.filter.accepts(c.constraint):
            return
        if c.weight > self.config.limits.max_weight:
            self.limit_hit = True
            return
        if self._redundant(c):
            self.trace.emit("subsumed", c)
            return
        c = self._store(c)
        self.trace.emit("asserted" if c.rule == ASSERT else "derived", c)

    def run(self, inputs: Sequence[AClause]) -> SaturationResult:
        limits = self.config.limits
        for c in inputs:
            self._consider(c)
        ratio = self.config.limits.weight_ratio
        while self.passive:
            if self.iterations >= limits.max_iterations or self.next_id > limits.max_clauses:
                self.limit_hit = True
                break
            # one oldest clause, then ``ratio`` lightest ones
            given = self._pop(self.iterations % (ratio + 1) != 0)
            if given is None:
                continue
            self.iterations += 1
            if any(subsumes(d, given) for d in self.active):
                self._index_drop(given)
                self.trace.emit("subsumed", given)
                continue
            kept = []
            for d in self.active:
                if subsumes(given, d):
                    self._index_drop(d)
                    self.trace.emit("subsumed", d)
                else:
                    kept.append(d)
            self.active = kept
            self.active.append(given)
            conclusions = self.calc.infer_single(given)
            for other in self.active:
                conclusions.extend(self.calc.infer_pair(given, other))
            for c in conclusions:
                self._consider(c)
                if self.next_id > limits.max_clauses:
                    self.limit_hit = True
                    break
        status = Status.LIMIT if self.limit_hit else Status.SATURATED
        clauses = self.active + sorted(self.passive.values(), key=lambda c: c.id)
        clauses.sort(key=lambda c: c.id)
        return SaturationResult(clauses, status, self.generated, self.iterations)


def make_calculus(
    ordering: Ordering,
    abducibles: Sequence[Term],
    predicates: Sequence[Symbol],
    mode: Mode,
    pfilter: Optional[PFilter] = None,
) -> Calculus:
    admissible = pfilter.accepts if pfilter is not None and pfilter.name != "none" else None
    return Calculus(ordering, tuple(abducibles), tuple(predicates), sar=mode is Mode.SAR, admissible=admissible)


def saturate(
    clauses: Iterable[Iterable[Literal]],
    ordering: Ordering,
    abducibles: Sequence[Term],
    predicates: Sequence[Symbol] = (),
    config: Optional[SaturationConfig] = None,
    trace: Optional[TextIO] = None,
) -> SaturationResult:
    config = config or SaturationConfig()
    calc = make_calculus(ordering, abducibles, predicates, config.mode, config.filter)
    inputs = [calc.input_clause(c) for c in clauses]
    return Saturator(calc, config, trace).run(inputs)


@dataclass
class PipelineResult:
    implicates: List[Clause]
    status: Status
    first: SaturationResult
    second: SaturationResult


def combine_pipeline(
    clauses: Iterable[Iterable[Literal]],
    ordering: Ordering,
    abducibles: Sequence[Term],
    predicates: Sequence[Symbol] = (),
    limits: Optional[Limits] = None,
    trace: Optional[TextIO] = None,
    extra_filter: Optional[PFilter] = None,
) -> PipelineResult:
    """SAR to saturation, then SA restricted to clauses entailing a first-stage implicate.

    ``extra_filter`` further restricts the second stage.
    """
    limits = limits or Limits()
    first = saturate(clauses, ordering, abducibles, predicates, SaturationConfig(Mode.SAR, PFilter(), limits), trace)
    c1 = extract(first.clauses)
    p: PFilter = EntailsOneOf(c1)
    if extra_filter is not None and extra_filter.name != "none":
        p = AllOf(p, extra_filter)
    second = saturate(c1, ordering, abducibles, predicates, SaturationConfig(Mode.SA, p, limits), trace)
    status = Status.LIMIT if Status.LIMIT in (first.status, second.status) else Status.SATURATED
    return PipelineResult(extract(second.clauses), status, first, second)
