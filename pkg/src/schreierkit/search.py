"""Counterexample search over small algebras.

Three goals: points that fail the Schreier condition, coherence instances
whose kernel images fail to generate the kernel, and fibre morphisms with
bijective kernel restriction but non-bijective total map (the split short
five lemma read off the Schreier class, where it can fail).

Universes: varieties "mon" and "srng" sweep the built-in catalog up to
max_size; variety "jt" enumerates generic tables, first with add alone, then
add plus one zero-absorbing binary op (absorption keeps kernels closed, and
is the only law imposed, so non-associative ops are searched too).

Every witness is serialized, re-loaded, and re-checked before it is
reported; a mismatch means a harness bug and raises.  Witnesses come out
canonically sorted, so a completed search is reproducible regardless of the
exploration order chosen by `seed`.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass

from .algebra import Kind, TabularAlgebra, make_algebra, same_signature
from .catalog import build_catalog
from .coherence import CoherenceInstance, check_kernel_coherence, jointly_strongly_epi
from .errors import ComputationError, StructuralError
from .points import (check_schreier, enumerate_fibre_morphisms,
                     enumerate_split_epis, kernel_restriction_bijective)
from .serialize import (SCHEMA_VERSION, Document, dumps_canonical,
                        point_from_dict, point_morphism_from_dict,
                        point_morphism_to_dict, point_to_dict)

GOALS = ("NonSchreier", "KernelCoherenceFailure", "SSFLFailureOffClass")

# Generic tables with a second op are enumerated only up to this size; the
# pair count grows as n^((n-1)^2) twice over.
JT_MUL_SIZE_CAP = 2


@dataclass(frozen=True)
class SearchBounds:
    max_size: int = 4
    timeout_s: float = 10.0
    max_witnesses: int = 100
    variety: str = "mon"
    seed: int | None = None

    def __post_init__(self):
        if self.variety not in ("mon", "srng", "jt"):
            raise StructuralError(f"unknown search variety {self.variety!r}")
        if self.max_size < 1 or self.max_witnesses < 1:
            raise StructuralError("search bounds must be positive")


@dataclass(frozen=True)
class SearchResult:
    goal: str
    bounds: SearchBounds
    witnesses: tuple[Document, ...]
    completed: bool
    timed_out: bool
    examined: int
    elapsed_s: float


class _TimeUp(Exception):
    pass


class _Clock:
    def __init__(self, timeout_s: float):
        self.start = time.monotonic()
        self.deadline = self.start + timeout_s

    def tick(self) -> None:
        if time.monotonic() > self.deadline:
            raise _TimeUp

    def elapsed(self) -> float:
        return time.monotonic() - self.start


def _jt_add_tables(n: int):
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    for fill in itertools.product(range(n), repeat=len(cells)):
        rows = [[0] * n for _ in range(n)]
        for j in range(n):
            rows[0][j] = j
            rows[j][0] = j
        for (i, j), v in zip(cells, fill):
            rows[i][j] = v
        yield rows


def _jt_mul_tables(n: int):
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    for fill in itertools.product(range(n), repeat=len(cells)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in zip(cells, fill):
            rows[i][j] = v
        yield rows


def _jt_universe(max_size: int) -> list[TabularAlgebra]:
    out = []
    for n in range(1, max_size + 1):
        for add in _jt_add_tables(n):
            out.append(make_algebra(Kind.JT_GENERIC, add))
    for n in range(1, min(max_size, JT_MUL_SIZE_CAP) + 1):
        for add in _jt_add_tables(n):
            for mul in _jt_mul_tables(n):
                out.append(make_algebra(Kind.JT_GENERIC, add,
                                        {"mul": mul}, {"mul": ["absorb"]}))
    return out


def _universe(bounds: SearchBounds) -> list[TabularAlgebra]:
    if bounds.variety == "jt":
        algebras = _jt_universe(bounds.max_size)
    else:
        cat = build_catalog()
        pool = cat.algebras(bounds.variety)
        algebras = [a for _, a in sorted(pool.items()) if a.size <= bounds.max_size]
    if bounds.seed is not None:
        random.Random(bounds.seed).shuffle(algebras)
    return algebras


def _witness(goal: str, checker: str, payload: Document, verdict: str) -> Document:
    return {"type": "witness", "schema": SCHEMA_VERSION, "goal": goal,
            "checker": checker, "payload": payload, "verdict": verdict}


def _kernel_coherence_verdict(inst: CoherenceInstance) -> str:
    chk = check_kernel_coherence(inst)
    return f"kernel_jse={chk.ok}, generated={list(chk.generated.members)}"


def _ssfl_verdict(kernel_bijective: bool, bijective: bool) -> str:
    return f"kernel_bijective={kernel_bijective}, bijective={bijective}"


def replay_witness(doc: Document) -> str:
    """Re-run the witness's checker on its embedded payload, from scratch."""
    checker = doc.get("checker")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise StructuralError("witness: missing payload object")
    if checker == "schreier":
        p = point_from_dict(payload["point"])
        return check_schreier(p).describe()
    if checker == "kernel_coherence":
        f = point_morphism_from_dict(payload["f"])
        g = point_morphism_from_dict(payload["g"])
        return _kernel_coherence_verdict(CoherenceInstance(f, g))
    if checker == "ssfl":
        m = point_morphism_from_dict(payload["morphism"])
        return _ssfl_verdict(kernel_restriction_bijective(m), m.g.is_bijective())
    raise StructuralError(f"witness: unknown checker {checker!r}")


def _reverify(doc: Document) -> Document:
    # Round-trip through the serialized form so the replay sees exactly what
    # a reader of the witness file would see.
    round_tripped = json.loads(dumps_canonical(doc))
    verdict = replay_witness(round_tripped)
    if verdict != doc["verdict"]:
        raise ComputationError(
            f"witness failed re-verification: stored {doc['verdict']!r}, replayed {verdict!r}")
    return doc


def _points_over(algebras, clock: _Clock):
    """All split-epi points between universe algebras, grouped by base."""
    by_base: dict[TabularAlgebra, list] = {}
    for A in algebras:
        for B in algebras:
            if A.size < B.size or not same_signature(A, B):
                continue
            clock.tick()
            for p in enumerate_split_epis(A, B):
                by_base.setdefault(B, []).append(p)
    return by_base


def _search_non_schreier(goal, algebras, clock, tally):
    for A in algebras:
        for B in algebras:
            if A.size < B.size or not same_signature(A, B):
                continue
            clock.tick()
            for p in enumerate_split_epis(A, B):
                tally[0] += 1
                w = check_schreier(p)
                if not w.is_schreier:
                    yield _witness(goal, "schreier", {"point": point_to_dict(p)},
                                   w.describe())


def _search_kernel_coherence(goal, algebras, clock, tally):
    by_base = _points_over(algebras, clock)
    for points in by_base.values():
        schreier = [p for p in points if check_schreier(p).is_schreier]
        for middle in schreier:
            clock.tick()
            fs = [m for left in schreier
                  for m in enumerate_fibre_morphisms(left, middle)]
            for f in fs:
                for g in fs:
                    if not jointly_strongly_epi(f.g, g.g).ok:
                        continue
                    tally[0] += 1
                    inst = CoherenceInstance(f, g)
                    chk = check_kernel_coherence(inst)
                    if not chk.ok:
                        payload = {"f": point_morphism_to_dict(f),
                                   "g": point_morphism_to_dict(g)}
                        yield _witness(goal, "kernel_coherence", payload,
                                       _kernel_coherence_verdict(inst))


def _search_ssfl(goal, algebras, clock, tally):
    by_base = _points_over(algebras, clock)
    for points in by_base.values():
        for src in points:
            clock.tick()
            for tgt in points:
                for m in enumerate_fibre_morphisms(src, tgt):
                    tally[0] += 1
                    kb = kernel_restriction_bijective(m)
                    bij = m.g.is_bijective()
                    if kb and not bij:
                        payload = {"morphism": point_morphism_to_dict(m)}
                        yield _witness(goal, "ssfl", payload,
                                       _ssfl_verdict(kb, bij))


_GOAL_RUNNERS = {
    "NonSchreier": _search_non_schreier,
    "KernelCoherenceFailure": _search_kernel_coherence,
    "SSFLFailureOffClass": _search_ssfl,
}


def search_counterexamples(goal: str, bounds: SearchBounds = SearchBounds()
                           ) -> SearchResult:
    """Sweep the bounded universe for the goal; see the module docstring.

    `completed` is False when the timeout fired or the witness cap was hit,
    in which case the witness list covers only the explored prefix.
    """
    if goal not in GOALS:
        raise StructuralError(f"unknown goal {goal!r}, expected one of {GOALS}")
    algebras = _universe(bounds)
    clock = _Clock(bounds.timeout_s)
    tally = [0]
    found: dict[str, Document] = {}
    timed_out = False
    truncated = False
    try:
        for doc in _GOAL_RUNNERS[goal](goal, algebras, clock, tally):
            found.setdefault(dumps_canonical(doc), doc)
            if len(found) >= bounds.max_witnesses:
                truncated = True
                break
    except _TimeUp:
        timed_out = True
    witnesses = tuple(_reverify(doc) for _, doc in sorted(found.items()))
    return SearchResult(goal=goal, bounds=bounds, witnesses=witnesses,
                        completed=not (timed_out or truncated),
                        timed_out=timed_out, examined=tally[0],
                        elapsed_s=clock.elapsed())


def result_to_dict(res: SearchResult) -> Document:
    return {
        "type": "search_result", "schema": SCHEMA_VERSION, "goal": res.goal,
        "bounds": {"max_size": res.bounds.max_size,
                   "timeout_s": res.bounds.timeout_s,
                   "max_witnesses": res.bounds.max_witnesses,
                   "variety": res.bounds.variety, "seed": res.bounds.seed},
        "completed": res.completed, "timed_out": res.timed_out,
        "examined": res.examined, "witnesses": list(res.witnesses),
    }
