"""Right adjoints to change of base between action categories.

For a monoid homomorphism h: E -> B and an action F of E on M, the cofree
B-action lives on

    L(B, M) = { u : B -> M | e . u(b) = u(h(e) + b) for all e, b }

with pointwise addition and the shift action (b0 . u)(b) = u(b + b0).  The
counit is evaluation at 0; the mediating map for an equivariant beta is
gamma(x)(b) = beta(b . x).  When h is surjective and a basepoint-preserving
set-section is chosen, L(B, M) collapses onto a submonoid of M; with a
non-pointed section the displayed submonoid can fail to be isomorphic to
L(B, M), so cofree_mon_surjective records the comparison's outcome as data
instead of assuming it.

For semirings along a surjective h, the right adjoint is the invariant
subalgebra R_h(X) = { x | e1 . x = e2 . x and x . e1 = x . e2 whenever
h(e1) = h(e2) }, with B acting through any preimage.

Identities that are theorems for valid inputs (closure of the filtered
carriers, equivariance of the counit, the triangle equation) are still
checked; their failure raises ComputationError, marking an internal bug.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .actions import (MonoidAction, SemiringAction, equivariant_homs,
                      restrict_action, validate_action)
from .algebra import (Hom, TabularAlgebra, check_hom, compose,
                      restrict_to_subalgebra)
from .errors import ComputationError, GuardExceeded, StructuralError

DEFAULT_FUNC_GUARD = 1_000_000
DEFAULT_HOMSET_GUARD = 100_000


# ---------------------------------------------------------------------------
# monoids: the cofree action L(B, M)


@dataclass(frozen=True)
class CofreeTable:
    """L(B, M) materialized: membership-filtered functions, pointwise monoid,
    shift action.  elements[i] is the function u as a tuple indexed by B;
    element 0 is the zero function."""

    h: Hom  # E -> B
    m_action: MonoidAction  # the given action of E on M
    elements: tuple[tuple[int, ...], ...]
    monoid: TabularAlgebra  # pointwise addition on elements
    action: MonoidAction  # shift action of B on the monoid

    @property
    def M(self) -> TabularAlgebra:
        return self.m_action.X

    def index_of(self, u: tuple[int, ...]) -> int | None:
        try:
            return self.elements.index(tuple(u))
        except ValueError:
            return None


def _member_mon(u, h: Hom, F: MonoidAction) -> bool:
    badd = h.target.add
    return all(F.act[e][u[b]] == u[badd[h.map[e]][b]]
               for e in h.source.elements for b in h.target.elements)


def cofree_mon(h: Hom, F: MonoidAction, *, guard: int = DEFAULT_FUNC_GUARD) -> CofreeTable:
    """Compute L(B, M) for h: E -> B and an action F of E on M.

    Enumerates all |M| ** |B| functions and filters by membership, so the
    guard bounds that count.  Elements come out in lexicographic order, which
    puts the zero function at index 0.
    """
    if F.B != h.source:
        raise StructuralError("cofree_mon: the action must act by the source of h")
    B, M = h.target, F.X
    required = M.size ** B.size
    if required > guard:
        raise GuardExceeded("cofree_mon", required, guard)
    elements = tuple(u for u in itertools.product(M.elements, repeat=B.size)
                     if _member_mon(u, h, F))
    if not elements or elements[0] != (0,) * B.size:
        raise ComputationError("zero function missing from L(B, M)")
    pos = {u: i for i, u in enumerate(elements)}

    def locate(u, what: str) -> int:
        i = pos.get(u)
        if i is None:
            raise ComputationError(f"L(B, M) not closed under {what} at {u}")
        return i

    add = tuple(tuple(locate(tuple(M.add[u[b]][v[b]] for b in B.elements), "pointwise +")
                      for v in elements) for u in elements)
    monoid = TabularAlgebra(M.kind, len(elements), add)
    shift = tuple(tuple(locate(tuple(u[B.add[b][b0]] for b in B.elements), "shift")
                        for u in elements) for b0 in B.elements)
    action = MonoidAction(B, monoid, shift)
    rep = validate_action(action)
    if not rep.ok:
        raise ComputationError(f"shift action violates {rep.first_violation()}")
    return CofreeTable(h, F, elements, monoid, action)


def counit_mon(c: CofreeTable) -> Hom:
    """Evaluation at 0_B, as a homomorphism L(B, M) -> M.

    Verified to be a homomorphism and equivariant from the restriction of the
    shift action along h to the given action on M.
    """
    eps = Hom(c.monoid, c.M, tuple(u[0] for u in c.elements))
    chk = check_hom(eps)
    if not chk.ok:
        raise ComputationError(f"counit fails to be a homomorphism at {chk.witness}")
    F, h = c.m_action, c.h
    for e in h.source.elements:
        for i in range(len(c.elements)):
            if eps.map[c.action.act[h.map[e]][i]] != F.act[e][eps.map[i]]:
                raise ComputationError(f"counit fails equivariance at (e={e}, u={c.elements[i]})")
    return eps


def mediate_mon(c: CofreeTable, G: MonoidAction, beta: Hom, *,
                check_unique: bool = True,
                guard: int = DEFAULT_HOMSET_GUARD) -> Hom:
    """The mediating map gamma: S -> L(B, M) for an equivariant beta: h*(G) -> M.

    gamma(x)(b) = beta(b . x).  Rejects a beta that is not a homomorphism or
    not equivariant for the restricted action.  Verifies that gamma lands in
    L(B, M), is an equivariant homomorphism, and satisfies counit . gamma =
    beta; with check_unique, exhaustively confirms no other equivariant map
    satisfies the triangle.
    """
    h, F = c.h, c.m_action
    if G.B != h.target:
        raise StructuralError("mediate_mon: G must be an action of the target of h")
    if beta.source != G.X or beta.target != c.M:
        raise StructuralError("mediate_mon: beta must map the carrier of G to M")
    chk = check_hom(beta)
    if not chk.ok:
        raise StructuralError(f"beta is not a homomorphism: witness {chk.witness}")
    for e in h.source.elements:
        for x in G.X.elements:
            if beta.map[G.act[h.map[e]][x]] != F.act[e][beta.map[x]]:
                raise StructuralError(f"beta is not equivariant at (e={e}, x={x})")
    pos = {u: i for i, u in enumerate(c.elements)}
    B = h.target
    rows = []
    for x in G.X.elements:
        u = tuple(beta.map[G.act[b][x]] for b in B.elements)
        i = pos.get(u)
        if i is None:
            raise ComputationError(f"mediating image {u} escapes L(B, M)")
        rows.append(i)
    gamma = Hom(G.X, c.monoid, tuple(rows))
    chk = check_hom(gamma)
    if not chk.ok:
        raise ComputationError(f"gamma fails to be a homomorphism at {chk.witness}")
    for b in B.elements:
        for x in G.X.elements:
            if gamma.map[G.act[b][x]] != c.action.act[b][gamma.map[x]]:
                raise ComputationError(f"gamma fails equivariance at (b={b}, x={x})")
    for x in G.X.elements:
        if c.elements[gamma.map[x]][0] != beta.map[x]:
            raise ComputationError(f"triangle identity fails at x={x}")
    if check_unique:
        mediators = [g for g in equivariant_homs(G, c.action, guard=guard)
                     if all(c.elements[g.map[x]][0] == beta.map[x] for x in G.X.elements)]
        if [g.map for g in mediators] != [gamma.map]:
            raise ComputationError(f"expected a unique mediating map, found {len(mediators)}")
    return gamma


# ---------------------------------------------------------------------------
# monoids: the simplified description along a surjection


@dataclass(frozen=True)
class SurjectiveCofree:
    """The submonoid { m | (e + sect(b)) . m = sect(h(e) + b) . m } of M,
    with the comparison m |-> (b |-> sect(b) . m) into cofree_mon(h, F).

    For a basepoint-preserving section the comparison is an isomorphism and
    the submonoid is independent of the section; for other set-sections the
    comparison can fail, and that outcome is recorded in is_isomorphism and
    failure rather than raised.
    """

    h: Hom
    m_action: MonoidAction
    sect: tuple[int, ...]
    members: tuple[int, ...]
    monoid: TabularAlgebra  # the submonoid, restricted from M
    embed: tuple[int, ...]
    cofree: CofreeTable
    compare: tuple[int, ...]  # submonoid index -> index in cofree.elements
    is_isomorphism: bool
    failure: str | None


def cofree_mon_surjective(h: Hom, F: MonoidAction, sect, *,
                          guard: int = DEFAULT_FUNC_GUARD) -> SurjectiveCofree:
    """The simplified L(B, M) along a surjective h with a chosen set-section."""
    if F.B != h.source:
        raise StructuralError("cofree_mon_surjective: the action must act by the source of h")
    if not h.is_surjective():
        raise StructuralError("cofree_mon_surjective needs a surjective h")
    E, B, M = h.source, h.target, F.X
    sect = tuple(sect)
    if len(sect) != B.size or any(not (0 <= e < E.size) for e in sect):
        raise StructuralError("sect must assign an element of E to each element of B")
    if any(h.map[sect[b]] != b for b in B.elements):
        raise StructuralError("sect is not a right inverse of h")
    act = F.act
    members = tuple(m for m in M.elements
                    if all(act[E.add[e][sect[b]]][m] == act[sect[B.add[h.map[e]][b]]][m]
                           for e in E.elements for b in B.elements))
    mset = set(members)
    if 0 not in mset:
        raise ComputationError("0 escapes the simplified submonoid")
    for m1 in members:  # closure is a theorem: the membership condition is additive
        for m2 in members:
            if M.add[m1][m2] not in mset:
                raise ComputationError(f"submonoid not closed at ({m1}, {m2})")
    monoid, embed = restrict_to_subalgebra(M, members)
    cofree = cofree_mon(h, F, guard=guard)
    pos = {u: i for i, u in enumerate(cofree.elements)}
    compare = []
    for m in embed:
        u = tuple(act[sect[b]][m] for b in B.elements)
        i = pos.get(u)
        if i is None:
            raise ComputationError(f"comparison image {u} escapes L(B, M)")
        compare.append(i)
    compare = tuple(compare)
    is_iso, failure = _compare_verdict(monoid, cofree, compare)
    return SurjectiveCofree(h, F, sect, members, monoid, embed, cofree,
                            compare, is_iso, failure)


def _compare_verdict(monoid: TabularAlgebra, cofree: CofreeTable,
                     compare: tuple[int, ...]) -> tuple[bool, str | None]:
    if len(set(compare)) != len(compare):
        return False, "comparison map is not injective"
    if set(compare) != set(range(len(cofree.elements))):
        return False, "comparison map is not surjective onto L(B, M)"
    if compare[0] != 0:
        return False, "comparison map does not preserve the zero"
    for i in range(monoid.size):
        for j in range(monoid.size):
            if compare[monoid.add[i][j]] != cofree.monoid.add[compare[i]][compare[j]]:
                return False, f"comparison map fails additivity at ({i}, {j})"
    return True, None


def pointed_sections(h: Hom) -> tuple[tuple[int, ...], ...]:
    """All basepoint-preserving set-sections of a surjective h, lex ordered."""
    if not h.is_surjective():
        raise StructuralError("sections exist only for surjective maps")
    fibres = [[e for e in h.source.elements if h.map[e] == b] for b in h.target.elements]
    fibres[0] = [0]
    return tuple(itertools.product(*fibres))


def all_sections(h: Hom) -> tuple[tuple[int, ...], ...]:
    """Every set-section of a surjective h, basepoint-preserving or not."""
    if not h.is_surjective():
        raise StructuralError("sections exist only for surjective maps")
    fibres = [[e for e in h.source.elements if h.map[e] == b] for b in h.target.elements]
    return tuple(itertools.product(*fibres))


# ---------------------------------------------------------------------------
# semirings: the invariant subalgebra R_h(X)


@dataclass(frozen=True)
class InvariantSub:
    """R_h(X) for a surjective h: the elements on which h-equal scalars agree,
    as a subalgebra of X with the induced B-action."""

    h: Hom
    x_action: SemiringAction
    members: tuple[int, ...]
    algebra: TabularAlgebra
    embed: tuple[int, ...]
    action: SemiringAction  # B acting on the subalgebra


def invariants_srng(h: Hom, F: SemiringAction) -> InvariantSub:
    """Compute R_h(X) and its induced B-action along a surjective h.

    The induced action evaluates through the least preimage of each b; the
    defining condition makes the choice irrelevant, which is verified over
    all preimages anyway.
    """
    if F.B != h.source:
        raise StructuralError("invariants_srng: the action must act by the source of h")
    if not h.is_surjective():
        raise StructuralError("invariants_srng needs a surjective h")
    E, B, X = h.source, h.target, F.X
    left, right = F.left, F.right
    fibres = [[e for e in E.elements if h.map[e] == b] for b in B.elements]
    members = tuple(x for x in X.elements
                    if all(left[e][x] == left[fib[0]][x] and right[x][e] == right[x][fib[0]]
                           for fib in fibres for e in fib[1:]))
    mset = set(members)
    for name, t in X.all_tables():  # closure under + and . is a theorem
        for x in members:
            for y in members:
                if t[x][y] not in mset:
                    raise ComputationError(f"R_h(X) not closed under {name} at ({x}, {y})")
    algebra, embed = restrict_to_subalgebra(X, members)
    pos = {v: i for i, v in enumerate(embed)}
    pre = tuple(fib[0] for fib in fibres)

    def sub_left(b: int, i: int) -> int:
        v = left[pre[b]][embed[i]]
        if v not in pos:
            raise ComputationError(f"action escapes R_h(X) at ({b} . {embed[i]})")
        return pos[v]

    def sub_right(i: int, b: int) -> int:
        v = right[embed[i]][pre[b]]
        if v not in pos:
            raise ComputationError(f"action escapes R_h(X) at ({embed[i]} . {b})")
        return pos[v]

    bl = tuple(tuple(sub_left(b, i) for i in range(len(embed))) for b in B.elements)
    br = tuple(tuple(sub_right(i, b) for b in B.elements) for i in range(len(embed)))
    for b in B.elements:  # choice-independence across whole fibres
        for e in fibres[b]:
            for i, v in enumerate(embed):
                if left[e][v] != left[pre[b]][v] or right[v][e] != right[v][pre[b]]:
                    raise ComputationError(f"preimage choice matters at (b={b}, e={e}, x={v})")
    action = SemiringAction(B, algebra, bl, br)
    rep = validate_action(action)
    if not rep.ok:
        raise ComputationError(f"induced action violates {rep.first_violation()}")
    return InvariantSub(h, F, members, algebra, embed, action)


def restrict_invariant_map(inv: InvariantSub, w: Hom) -> Hom:
    """R_h on maps: restrict an equivariant w: X -> X to R_h(X)."""
    if w.source != inv.x_action.X or w.target != inv.x_action.X:
        raise StructuralError("restrict_invariant_map expects an endomap of the carrier")
    pos = {v: i for i, v in enumerate(inv.embed)}
    rows = []
    for v in inv.embed:
        img = w.map[v]
        if img not in pos:
            raise ComputationError(f"equivariant map leaves R_h(X) at {v}")
        rows.append(pos[img])
    return Hom(inv.algebra, inv.algebra, tuple(rows))


# ---------------------------------------------------------------------------
# semirings: adjunction verification


@dataclass(frozen=True)
class AdjunctionReport:
    h: Hom
    lhs_count: int  # equivariant maps h*(G) -> F
    rhs_count: int  # equivariant maps G -> R_h(F)
    bijection_ok: bool
    naturality_ok: bool
    functoriality_ok: bool
    failure: str | None

    @property
    def ok(self) -> bool:
        return (self.lhs_count == self.rhs_count and self.bijection_ok
                and self.naturality_ok and self.functoriality_ok)


def verify_adjunction_srng(h: Hom, G: SemiringAction, F: SemiringAction, *,
                           guard: int = DEFAULT_HOMSET_GUARD) -> AdjunctionReport:
    """Exhibit the bijection Hom_E(h*(G), F) = Hom_B(G, R_h(F)).

    Every equivariant map on the left lands inside R_h(X) and corestricts to
    a map on the right; the two hom-sets are enumerated independently and the
    corestriction is checked to be a bijection.  Naturality is sampled on
    equivariant endomaps of F and of G; functoriality of the restriction on
    composable pairs.
    """
    if G.B != h.target or F.B != h.source:
        raise StructuralError("verify_adjunction_srng: G acts by the target of h, F by its source")
    inv = invariants_srng(h, F)
    restricted = restrict_action(h, G)
    lhs = equivariant_homs(restricted, F, guard=guard)
    rhs = equivariant_homs(G, inv.action, guard=guard)
    pos = {v: i for i, v in enumerate(inv.embed)}

    def corestrict(t: Hom) -> tuple[int, ...] | None:
        out = []
        for y in G.X.elements:
            i = pos.get(t.map[y])
            if i is None:
                return None
            out.append(i)
        return tuple(out)

    failure = None
    rhs_maps = {u.map for u in rhs}
    images = []
    for t in lhs:
        c = corestrict(t)
        if c is None:
            failure = f"a left-hand map escapes R_h(X): {t.map}"
            break
        if c not in rhs_maps:
            failure = f"corestriction {c} is not equivariant on the right"
            break
        images.append(c)
    bijection_ok = (failure is None and len(set(images)) == len(images)
                    and set(images) == rhs_maps)
    if failure is None and not bijection_ok:
        failure = "corestriction is not a bijection of hom-sets"

    naturality_ok = True
    if bijection_ok:
        endos_f = equivariant_homs(F, F, guard=guard)
        for w in endos_f:
            rw = restrict_invariant_map(inv, w)
            for t in lhs:
                lhs_side = corestrict(Hom(G.X, F.X, tuple(w.map[t.map[y]] for y in G.X.elements)))
                rhs_side = tuple(rw.map[i] for i in corestrict(t))
                if lhs_side != rhs_side:
                    naturality_ok = False
                    failure = f"naturality square fails for w={w.map}, t={t.map}"
                    break
            if not naturality_ok:
                break
        if naturality_ok:
            for v in equivariant_homs(G, G, guard=guard):
                for t in lhs:
                    if corestrict(compose(t, v)) != tuple(
                            corestrict(t)[v.map[y]] for y in G.X.elements):
                        naturality_ok = False
                        failure = f"naturality square fails for v={v.map}, t={t.map}"
                        break
                if not naturality_ok:
                    break

    functoriality_ok = True
    if bijection_ok and naturality_ok:
        endos_f = equivariant_homs(F, F, guard=guard)
        for w1 in endos_f:
            for w2 in endos_f:
                both = restrict_invariant_map(inv, compose(w1, w2))
                stepwise = compose(restrict_invariant_map(inv, w1),
                                   restrict_invariant_map(inv, w2))
                if both.map != stepwise.map:
                    functoriality_ok = False
                    failure = f"restriction fails functoriality at ({w1.map}, {w2.map})"
                    break
            if not functoriality_ok:
                break

    return AdjunctionReport(h, len(lhs), len(rhs), bijection_ok,
                            naturality_ok, functoriality_ok, failure)
