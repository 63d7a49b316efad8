"""Points (split epimorphisms with a chosen section) and Schreier structure.

A point is f: A -> B together with a section s (f after s is the identity).
It is Schreier when every a in A splits uniquely as a = alpha + s(f(a)) with
alpha in the kernel f^{-1}(0); the induced retraction q is a plain map, not a
homomorphism in general.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .algebra import (DEFAULT_HOM_GUARD, Hom, Subset, TabularAlgebra, compose,
                      check_hom, enumerate_homs, generated_subalgebra,
                      identity_hom, pullback, restrict_to_subalgebra, subset)
from .errors import StructuralError


@dataclass(frozen=True)
class Point:
    """A split epimorphism f: A -> B with section s; kernel cached at construction.

    Construction enforces that f and s are homomorphisms, that f(s(b)) = b,
    and that the kernel is closed under every op (automatic for monoids and
    semirings; a real constraint for jt signatures).
    """

    A: TabularAlgebra
    B: TabularAlgebra
    f: Hom
    s: Hom
    kernel: Subset = None  # type: ignore[assignment]  # computed below

    def __post_init__(self):
        if self.f.source != self.A or self.f.target != self.B:
            raise StructuralError("f must map A to B")
        if self.s.source != self.B or self.s.target != self.A:
            raise StructuralError("s must map B to A")
        for h, name in ((self.f, "f"), (self.s, "s")):
            chk = check_hom(h)
            if not chk.ok:
                raise StructuralError(f"{name} is not a homomorphism: witness {chk.witness}")
        if compose(self.f, self.s).map != identity_hom(self.B).map:
            raise StructuralError("s is not a section of f")
        ker = subset(self.A, (a for a in self.A.elements if self.f.map[a] == 0))
        members = set(ker.members)
        for name, t in self.A.all_tables():
            for x in ker:
                for y in ker:
                    if t[x][y] not in members:
                        raise StructuralError(f"kernel not closed under {name} at ({x}, {y})")
        object.__setattr__(self, "kernel", ker)

    def section_image(self, a: int) -> int:
        """s(f(a))."""
        return self.s.map[self.f.map[a]]


def identity_point(b: TabularAlgebra) -> Point:
    return Point(b, b, identity_hom(b), identity_hom(b))


def product_point(b: TabularAlgebra, x: TabularAlgebra) -> Point:
    """The trivial point B x X -> B with section b |-> (b, 0)."""
    from .algebra import product
    pr = product(b, x)
    return Point(pr.algebra, b, pr.proj1, pr.inj1)


class SchreierStatus(Enum):
    SCHREIER = "schreier"
    EXISTENCE_FAILS = "existence_fails"
    UNIQUENESS_FAILS = "uniqueness_fails"


@dataclass(frozen=True)
class SchreierWitness:
    point: Point
    status: SchreierStatus
    q: tuple[int, ...] | None  # the retraction, defined only when Schreier
    element: int | None  # failing element, when not Schreier
    alphas: tuple[int, int] | None  # two distinct decompositions, when uniqueness fails

    @property
    def is_schreier(self) -> bool:
        return self.status is SchreierStatus.SCHREIER

    def describe(self) -> str:
        if self.is_schreier:
            return "Schreier"
        if self.status is SchreierStatus.EXISTENCE_FAILS:
            return f"ExistenceFails(a={self.element})"
        return f"UniquenessFails(a={self.element}, alphas={self.alphas})"


def check_schreier(p: Point) -> SchreierWitness:
    """Decide the Schreier condition by counting decompositions of every element.

    A uniqueness failure is reported in preference to an existence failure;
    within each failure kind, the least failing element (carrier order) is the
    witness.
    """
    add = p.A.add
    q: list[int] = []
    existence_at: int | None = None
    for a in p.A.elements:
        sb = p.section_image(a)
        sols = [alpha for alpha in p.kernel if add[alpha][sb] == a]
        if len(sols) > 1:
            return SchreierWitness(p, SchreierStatus.UNIQUENESS_FAILS, None, a, (sols[0], sols[1]))
        if not sols:
            if existence_at is None:
                existence_at = a
            q.append(-1)
        else:
            q.append(sols[0])
    if existence_at is not None:
        # No element had two decompositions; a later element may still, so the
        # scan above must finish before existence failures are reported.
        return SchreierWitness(p, SchreierStatus.EXISTENCE_FAILS, None, existence_at, None)
    return SchreierWitness(p, SchreierStatus.SCHREIER, tuple(q), None, None)


def schreier_retraction(p: Point) -> tuple[int, ...]:
    from .errors import NotSchreier
    w = check_schreier(p)
    if not w.is_schreier:
        raise NotSchreier(w)
    return w.q


@dataclass(frozen=True)
class StrongPointCheck:
    ok: bool
    generated: Subset


def is_strong_point(p: Point) -> StrongPointCheck:
    """Kernel and section image jointly generate A (the varietal reading of
    'kernel inclusion and section jointly strongly epimorphic')."""
    gens = set(p.kernel.members) | set(p.s.map)
    generated = generated_subalgebra(p.A, gens)
    return StrongPointCheck(generated.is_all(), generated)


def kernel_algebra(p: Point) -> tuple[TabularAlgebra, tuple[int, ...]]:
    """The kernel as an algebra of its own, plus the embedding into A."""
    return restrict_to_subalgebra(p.A, p.kernel.members)


# ---------------------------------------------------------------------------
# limits of points


@dataclass(frozen=True)
class PulledBackPoint:
    point: Point  # over E
    pairs: tuple[tuple[int, int], ...]  # (a, e) carrier of the new total algebra
    to_A: Hom  # first projection, a morphism of total algebras

    def kernel_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.pairs[i] for i in self.point.kernel)


def pullback_point(h: Hom, p: Point) -> PulledBackPoint:
    """Change of base: pull p = (A, f, s) back along h: E -> B.

    The new point lives over E: carrier {(a, e) | f(a) = h(e)}, projection
    (a, e) |-> e, section e |-> (s(h(e)), e).  Its kernel is {(a, 0) | a in
    ker f}, in bijection with ker f.
    """
    if h.target != p.B:
        raise StructuralError("pullback_point: h must land in the base of p")
    pb = pullback(p.f, h)
    index = {pair: i for i, pair in enumerate(pb.pairs)}
    s_map = tuple(index[(p.s.map[h.map[e]], e)] for e in h.source.elements)
    new = Point(pb.algebra, h.source, pb.proj2, Hom(h.source, pb.algebra, s_map))
    return PulledBackPoint(new, pb.pairs, pb.proj1)


@dataclass(frozen=True)
class FibreProductPoint:
    point: Point  # over the common base
    pairs: tuple[tuple[int, int], ...]
    to_first: Hom
    to_second: Hom


def fibre_product_point(p1: Point, p2: Point) -> FibreProductPoint:
    """Binary product in the fibre over B: carrier {(a1, a2) | f1(a1) = f2(a2)},
    projection through f1, section <s1, s2>."""
    if p1.B != p2.B:
        raise StructuralError("fibre product needs points over the same base")
    pb = pullback(p1.f, p2.f)
    index = {pair: i for i, pair in enumerate(pb.pairs)}
    s_map = tuple(index[(p1.s.map[b], p2.s.map[b])] for b in p1.B.elements)
    f = compose(p1.f, pb.proj1)
    new = Point(pb.algebra, p1.B, f, Hom(p1.B, pb.algebra, s_map))
    return FibreProductPoint(new, pb.pairs, pb.proj1, pb.proj2)


# ---------------------------------------------------------------------------
# morphisms of points


@dataclass(frozen=True)
class PointMorphism:
    """A pair (g, h) with h . f1 = f2 . g and g . s1 = s2 . h."""

    source: Point
    target: Point
    g: Hom  # total algebras
    h: Hom  # bases

    def __post_init__(self):
        if self.g.source != self.source.A or self.g.target != self.target.A:
            raise StructuralError("g must map total algebras source -> target")
        if self.h.source != self.source.B or self.h.target != self.target.B:
            raise StructuralError("h must map bases source -> target")
        for hom, name in ((self.g, "g"), (self.h, "h")):
            chk = check_hom(hom)
            if not chk.ok:
                raise StructuralError(f"{name} is not a homomorphism: witness {chk.witness}")
        if compose(self.h, self.source.f).map != compose(self.target.f, self.g).map:
            raise StructuralError("projection square does not commute")
        if compose(self.g, self.source.s).map != compose(self.target.s, self.h).map:
            raise StructuralError("section square does not commute")

    @property
    def is_fibre(self) -> bool:
        return self.source.B == self.target.B and self.h.map == identity_hom(self.source.B).map

    def kernel_restriction(self) -> dict[int, int]:
        """g restricted to kernels (it always lands there)."""
        return {a: self.g.map[a] for a in self.source.kernel}


def enumerate_fibre_morphisms(p1: Point, p2: Point, *,
                              guard: int = DEFAULT_HOM_GUARD) -> tuple[PointMorphism, ...]:
    """All morphisms over the identity of the common base, in lex order of g."""
    if p1.B != p2.B:
        raise StructuralError("fibre morphisms need points over the same base")
    idb = identity_hom(p1.B)
    out = []
    for g in enumerate_homs(p1.A, p2.A, guard=guard):
        if compose(p2.f, g).map == p1.f.map and compose(g, p1.s).map == p2.s.map:
            out.append(PointMorphism(p1, p2, g, idb))
    return tuple(out)


def kernel_restriction_bijective(m: PointMorphism) -> bool:
    restriction = m.kernel_restriction()
    values = list(restriction.values())
    return (len(set(values)) == len(values)
            and set(values) == set(m.target.kernel.members))


def check_ssfl(m: PointMorphism) -> bool:
    """Split Short Five Lemma instance for a fibre morphism of Schreier points:
    if g restricts to a bijection on kernels then g is bijective.

    Returns whether the implication holds for this morphism.  Rejects
    non-fibre morphisms and non-Schreier endpoints.
    """
    from .errors import NotSchreier
    if not m.is_fibre:
        raise StructuralError("check_ssfl needs a fibre morphism (h = identity)")
    for p in (m.source, m.target):
        w = check_schreier(p)
        if not w.is_schreier:
            raise NotSchreier(w)
    return ssfl_implication(m)


def ssfl_implication(m: PointMorphism) -> bool:
    """The bare implication (kernel restriction bijective => g bijective),
    with no Schreier requirement.  Off the Schreier class it can fail; the
    search harness uses this form to look for such failures."""
    if not kernel_restriction_bijective(m):
        return True
    return m.g.is_bijective()


def enumerate_split_epis(A: TabularAlgebra, B: TabularAlgebra, *,
                         guard: int = DEFAULT_HOM_GUARD) -> tuple[Point, ...]:
    """Every point (f, s) with f: A -> B, ordered by (f, s) map arrays."""
    out = []
    sections = enumerate_homs(B, A, guard=guard)
    identity = tuple(range(B.size))
    for f in enumerate_homs(A, B, guard=guard):
        for s in sections:
            if tuple(f.map[v] for v in s.map) == identity:
                out.append(Point(A, B, f, s))
    return tuple(out)


def points_isomorphic(p1: Point, p2: Point, *,
                      guard: int = DEFAULT_HOM_GUARD) -> PointMorphism | None:
    """Search for an isomorphism of points: bijective (g, h) making both
    squares commute.  Returns the first found in (h, g) lex order, else None."""
    if p1.A.size != p2.A.size or p1.B.size != p2.B.size:
        return None
    for h in enumerate_homs(p1.B, p2.B, guard=guard):
        if not h.is_bijective():
            continue
        for g in enumerate_homs(p1.A, p2.A, guard=guard):
            if not g.is_bijective():
                continue
            if (compose(h, p1.f).map == compose(p2.f, g).map
                    and compose(g, p1.s).map == compose(p2.s, h).map):
                return PointMorphism(p1, p2, g, h)
    return None
