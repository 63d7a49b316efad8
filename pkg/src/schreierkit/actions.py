"""Actions of a base algebra on a kernel algebra, and semidirect products.

Monoid actions follow the composition-after convention: phi(b1 + b2) =
phi(b1) . phi(b2), i.e. act[b1 + b2][x] = act[b1][act[b2][x]].  Semiring
actions carry a left table B x X -> X and a right table X x B -> X subject to
six compatibility families, checked by validate_action.

Every Schreier point induces an action of its base on its kernel via the
retraction q: for monoids b.x = q(s(b) + k(x)); for semirings b.x =
q(s(b) k(x)) and x.b = q(k(x) s(b)).  The semidirect product rebuilds the
point from the action; the two constructions are mutually inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (DEFAULT_HOM_GUARD, Hom, Kind, TabularAlgebra, Table,
                      check_hom, enumerate_homs, identity_hom, make_algebra,
                      same_signature, validate_algebra)
from .errors import (ComputationError, InvalidAction, NotSchreier,
                     SignatureMismatch, StructuralError)
from .points import (Point, PointMorphism, SchreierWitness, check_schreier,
                     kernel_algebra)

MONOID_KINDS = (Kind.MONOID, Kind.COMMUTATIVE_MONOID)


def _check_table(t, rows: int, cols: int, what: str) -> Table:
    if len(t) != rows:
        raise StructuralError(f"{what}: expected {rows} rows, got {len(t)}")
    out = []
    for i, row in enumerate(t):
        if len(row) != cols:
            raise StructuralError(f"{what}: row {i} has {len(row)} entries, expected {cols}")
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class MonoidAction:
    """act[b][x] = b.x for a base monoid B acting on a monoid X."""

    B: TabularAlgebra
    X: TabularAlgebra
    act: Table

    def __post_init__(self):
        if self.B.kind not in MONOID_KINDS or self.X.kind not in MONOID_KINDS:
            raise SignatureMismatch("monoid action needs monoid-kind B and X")
        object.__setattr__(self, "act", _check_table(self.act, self.B.size, self.X.size, "act"))
        for row in self.act:
            for v in row:
                if not (0 <= v < self.X.size):
                    raise StructuralError(f"act value {v} out of range for X of size {self.X.size}")


@dataclass(frozen=True)
class SemiringAction:
    """left[b][x] = b.x and right[x][b] = x.b for semirings B, X."""

    B: TabularAlgebra
    X: TabularAlgebra
    left: Table
    right: Table

    def __post_init__(self):
        if self.B.kind is not Kind.SEMIRING or self.X.kind is not Kind.SEMIRING:
            raise SignatureMismatch("semiring action needs semiring-kind B and X")
        object.__setattr__(self, "left", _check_table(self.left, self.B.size, self.X.size, "act-left"))
        object.__setattr__(self, "right", _check_table(self.right, self.X.size, self.B.size, "act-right"))
        for row in self.left:
            for v in row:
                if not (0 <= v < self.X.size):
                    raise StructuralError("left action value out of range")
        for row in self.right:
            for v in row:
                if not (0 <= v < self.X.size):
                    raise StructuralError("right action value out of range")


Action = MonoidAction | SemiringAction


@dataclass(frozen=True)
class AxiomEntry:
    axiom: str
    ok: bool
    witness: tuple | None


@dataclass(frozen=True)
class ActionReport:
    action: Action
    entries: tuple[AxiomEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def first_violation(self) -> AxiomEntry | None:
        for e in self.entries:
            if not e.ok:
                return e
        return None


def _first(pred_iter):
    for w in pred_iter:
        return w
    return None


def validate_action(a: Action) -> ActionReport:
    """Check every action axiom; each entry carries the first witness found."""
    if isinstance(a, MonoidAction):
        return _validate_monoid_action(a)
    return _validate_semiring_action(a)


def _validate_monoid_action(a: MonoidAction) -> ActionReport:
    B, X, act = a.B, a.X, a.act
    entries = []
    entries.append(AxiomEntry(
        "endo_zero", *_wrap(_first((b,) for b in B.elements if act[b][0] != 0))))
    entries.append(AxiomEntry(
        "endo_add", *_wrap(_first((b, x, y) for b in B.elements
                                  for x in X.elements for y in X.elements
                                  if act[b][X.add[x][y]] != X.add[act[b][x]][act[b][y]]))))
    entries.append(AxiomEntry(
        "unit", *_wrap(_first((x,) for x in X.elements if act[0][x] != x))))
    entries.append(AxiomEntry(
        "compose", *_wrap(_first((b1, b2, x) for b1 in B.elements for b2 in B.elements
                                 for x in X.elements
                                 if act[B.add[b1][b2]][x] != act[b1][act[b2][x]]))))
    return ActionReport(a, tuple(entries))


def _wrap(witness):
    return (witness is None, witness)


def _validate_semiring_action(a: SemiringAction) -> ActionReport:
    B, X = a.B, a.X
    left, right = a.left, a.right
    bmul, xmul = B.op_table("mul"), X.op_table("mul")
    badd, xadd = B.add, X.add
    bs, xs = B.elements, X.elements
    entries = [
        AxiomEntry("zero", *_wrap(_first(
            w for w in (
                [( "0.x", x) for x in xs if left[0][x] != 0]
                + [("x.0", x) for x in xs if right[x][0] != 0]
                + [("b.0", b) for b in bs if left[b][0] != 0]
                + [("0.b", b) for b in bs if right[0][b] != 0])))),
        AxiomEntry("add_in_x_left", *_wrap(_first(
            (b, x1, x2) for b in bs for x1 in xs for x2 in xs
            if left[b][xadd[x1][x2]] != xadd[left[b][x1]][left[b][x2]]))),
        AxiomEntry("add_in_x_right", *_wrap(_first(
            (x1, x2, b) for x1 in xs for x2 in xs for b in bs
            if right[xadd[x1][x2]][b] != xadd[right[x1][b]][right[x2][b]]))),
        AxiomEntry("add_in_b_left", *_wrap(_first(
            (b1, b2, x) for b1 in bs for b2 in bs for x in xs
            if left[badd[b1][b2]][x] != xadd[left[b1][x]][left[b2][x]]))),
        AxiomEntry("add_in_b_right", *_wrap(_first(
            (x, b1, b2) for x in xs for b1 in bs for b2 in bs
            if right[x][badd[b1][b2]] != xadd[right[x][b1]][right[x][b2]]))),
        # b.(x1 x2) = (b.x1) x2 and (x1 x2).b = x1 (x2.b)
        AxiomEntry("mul_in_x", *_wrap(_first(
            w for w in (
                [(b, x1, x2) for b in bs for x1 in xs for x2 in xs
                 if left[b][xmul[x1][x2]] != xmul[left[b][x1]][x2]]
                + [(x1, x2, b) for x1 in xs for x2 in xs for b in bs
                   if right[xmul[x1][x2]][b] != xmul[x1][right[x2][b]]])))),
        # (b1 b2).x = b1.(b2.x) and x.(b1 b2) = (x.b1).b2
        AxiomEntry("mul_in_b", *_wrap(_first(
            w for w in (
                [(b1, b2, x) for b1 in bs for b2 in bs for x in xs
                 if left[bmul[b1][b2]][x] != left[b1][left[b2][x]]]
                + [(x, b1, b2) for x in xs for b1 in bs for b2 in bs
                   if right[right[x][b1]][b2] != right[x][bmul[b1][b2]]])))),
        # x1 (b.x2) = (x1.b) x2 and (b1.x).b2 = b1.(x.b2)
        AxiomEntry("mixed", *_wrap(_first(
            w for w in (
                [(x1, b, x2) for x1 in xs for b in bs for x2 in xs
                 if xmul[x1][left[b][x2]] != xmul[right[x1][b]][x2]]
                + [(b1, x, b2) for b1 in bs for x in xs for b2 in bs
                   if right[left[b1][x]][b2] != left[b1][right[x][b2]]])))),
    ]
    return ActionReport(a, tuple(entries))


def require_valid_action(a: Action) -> Action:
    report = validate_action(a)
    if not report.ok:
        raise InvalidAction(report)
    return a


# ---------------------------------------------------------------------------
# point -> action


def point_to_action(p: Point, witness: SchreierWitness | None = None) -> Action:
    """Extract the induced action of B on the kernel of a Schreier point.

    The kernel is materialized as an algebra X (indices 0..k-1 in kernel
    order).  Rejects non-Schreier points with the failing witness attached.
    """
    w = witness if witness is not None else check_schreier(p)
    if not w.is_schreier:
        raise NotSchreier(w)
    X, embed = kernel_algebra(p)
    pos = {v: i for i, v in enumerate(embed)}
    q = w.q
    if p.A.kind in MONOID_KINDS:
        act = tuple(tuple(pos[q[p.A.add[p.s.map[b]][k]]] for k in embed)
                    for b in p.B.elements)
        return MonoidAction(p.B, X, act)
    if p.A.kind is Kind.SEMIRING:
        mul = p.A.op_table("mul")
        left = tuple(tuple(pos[q[mul[p.s.map[b]][k]]] for k in embed)
                     for b in p.B.elements)
        right = tuple(tuple(pos[q[mul[k][p.s.map[b]]]] for b in p.B.elements)
                      for k in embed)
        return SemiringAction(p.B, X, left, right)
    raise SignatureMismatch("actions are defined for monoid and semiring signatures only")


# ---------------------------------------------------------------------------
# action -> point (semidirect products)


def _sd_index(x: int, b: int, bsize: int) -> int:
    return x * bsize + b


def semidirect(a: MonoidAction) -> Point:
    """Semidirect product point of a monoid action.

    Carrier X x B as pairs (x, b), addition (x1, b1) + (x2, b2) =
    (x1 + b1.x2, b1 + b2), projection onto B, section b |-> (0, b).  The
    result is Schreier with retraction (x, b) |-> (x, 0); the output algebra
    is re-validated, and a validation failure is a hard (internal) failure.
    """
    require_valid_action(a)
    X, B, act = a.X, a.B, a.act
    n = X.size * B.size
    add = []
    for x1 in X.elements:
        for b1 in B.elements:
            row = [_sd_index(X.add[x1][act[b1][x2]], B.add[b1][b2], B.size)
                   for x2 in X.elements for b2 in B.elements]
            add.append(tuple(row))
    alg = TabularAlgebra(Kind.MONOID, n, tuple(add))
    rep = validate_algebra(alg)
    if not rep.ok:
        raise ComputationError(f"semidirect product violates {rep.first_violation()}")
    f = Hom(alg, B, tuple(b for _ in X.elements for b in B.elements))
    s = Hom(B, alg, tuple(_sd_index(0, b, B.size) for b in B.elements))
    return Point(alg, B, f, s)


def semidirect_srng(a: SemiringAction) -> Point:
    """Semidirect product point of a semiring action: addition componentwise,
    multiplication (x1, b1)(x2, b2) = (x1 x2 + x1.b2 + b1.x2, b1 b2)."""
    require_valid_action(a)
    X, B = a.X, a.B
    left, right = a.left, a.right
    xmul, bmul = X.op_table("mul"), B.op_table("mul")
    n = X.size * B.size
    add, mul = [], []
    for x1 in X.elements:
        for b1 in B.elements:
            add.append(tuple(_sd_index(X.add[x1][x2], B.add[b1][b2], B.size)
                             for x2 in X.elements for b2 in B.elements))
            mul.append(tuple(
                _sd_index(X.add[X.add[xmul[x1][x2]][right[x1][b2]]][left[b1][x2]],
                          bmul[b1][b2], B.size)
                for x2 in X.elements for b2 in B.elements))
    alg = make_algebra(Kind.SEMIRING, add, {"mul": mul})
    rep = validate_algebra(alg)
    if not rep.ok:
        raise ComputationError(f"semidirect semiring violates {rep.first_violation()}")
    f = Hom(alg, B, tuple(b for _ in X.elements for b in B.elements))
    s = Hom(B, alg, tuple(_sd_index(0, b, B.size) for b in B.elements))
    return Point(alg, B, f, s)


def semidirect_point(a: Action) -> Point:
    return semidirect(a) if isinstance(a, MonoidAction) else semidirect_srng(a)


def roundtrip_point_iso(p: Point) -> PointMorphism:
    """The canonical comparison from semidirect(point_to_action(p)) back to p.

    Sends (x, b) to k(x) + s(b), where k embeds the kernel.  For a Schreier
    point this is an isomorphism of points over the identity of B; that it is
    a bijective homomorphism is verified, not assumed.
    """
    a = point_to_action(p)
    sd = semidirect_point(a)
    _, embed = kernel_algebra(p)
    g = Hom(sd.A, p.A, tuple(p.A.add[embed[x]][p.s.map[b]]
                             for x in a.X.elements for b in p.B.elements))
    chk = check_hom(g)
    if not chk.ok:
        raise ComputationError(f"comparison map fails to be a homomorphism at {chk.witness}")
    if not g.is_bijective():
        raise ComputationError("comparison map fails to be bijective")
    return PointMorphism(sd, p, g, identity_hom(p.B))


def restrict_action(h: Hom, a: Action) -> Action:
    """Change of base: turn an action of B into an action of E along h: E -> B."""
    if a.B != h.target:
        raise SignatureMismatch("restrict_action: h must land in the action's base")
    E = h.source
    if isinstance(a, MonoidAction):
        return MonoidAction(E, a.X, tuple(a.act[h.map[e]] for e in E.elements))
    return SemiringAction(E, a.X,
                          tuple(a.left[h.map[e]] for e in E.elements),
                          tuple(tuple(row[h.map[e]] for e in E.elements) for row in a.right))


# ---------------------------------------------------------------------------
# equivariant maps and action enumeration


def equivariant_homs(a1: Action, a2: Action, *,
                     guard: int = DEFAULT_HOM_GUARD) -> tuple[Hom, ...]:
    """Homs X1 -> X2 commuting with the actions of the common base."""
    if a1.B != a2.B:
        raise SignatureMismatch("equivariant homs need actions of the same base")
    if not same_signature(a1.X, a2.X):
        raise SignatureMismatch("equivariant homs need carriers of one signature")
    out = []
    if isinstance(a1, MonoidAction):
        for h in enumerate_homs(a1.X, a2.X, guard=guard):
            if all(h.map[a1.act[b][x]] == a2.act[b][h.map[x]]
                   for b in a1.B.elements for x in a1.X.elements):
                out.append(h)
    else:
        for h in enumerate_homs(a1.X, a2.X, guard=guard):
            if (all(h.map[a1.left[b][x]] == a2.left[b][h.map[x]]
                    for b in a1.B.elements for x in a1.X.elements)
                    and all(h.map[a1.right[x][b]] == a2.right[h.map[x]][b]
                            for x in a1.X.elements for b in a1.B.elements)):
                out.append(h)
    return tuple(out)


def additive_reduct(a: TabularAlgebra) -> TabularAlgebra:
    """Forget everything but the addition; the result is monoid-kind."""
    return TabularAlgebra(Kind.MONOID, a.size, a.add)


def endomorphism_monoid(x: TabularAlgebra) -> tuple[TabularAlgebra, tuple[tuple[int, ...], ...]]:
    """All endomorphisms of x as a monoid under composition-after.

    Element 0 is the identity endomorphism (the neutral element); the rest
    follow in lex order of their map arrays.  comp[i][j] is "apply j, then i",
    matching the action convention phi(b1 + b2) = phi(b1) . phi(b2).
    """
    endos = [h.map for h in enumerate_homs(x, x)]
    ident = tuple(range(x.size))
    maps = (ident,) + tuple(m for m in endos if m != ident)
    pos = {m: i for i, m in enumerate(maps)}
    comp = tuple(tuple(pos[tuple(mi[v] for v in mj)] for mj in maps) for mi in maps)
    return TabularAlgebra(Kind.MONOID, len(maps), comp), maps


def enumerate_monoid_actions(B: TabularAlgebra, X: TabularAlgebra, *,
                             guard: int = DEFAULT_HOM_GUARD) -> tuple[MonoidAction, ...]:
    """All actions of B on X, as homs B -> End(X)."""
    end, maps = endomorphism_monoid(X)
    out = []
    for h in enumerate_homs(B, end, guard=guard):
        act = tuple(maps[h.map[b]] for b in B.elements)
        out.append(MonoidAction(B, X, act))
    return tuple(out)


def _additive_endo_monoid(x: TabularAlgebra) -> tuple[TabularAlgebra, tuple[tuple[int, ...], ...]]:
    # Additive endomorphisms under pointwise addition; the zero map is the
    # neutral element and sorts first on its own.
    red = additive_reduct(x)
    maps = tuple(sorted(h.map for h in enumerate_homs(red, red)))
    pos = {m: i for i, m in enumerate(maps)}
    table = tuple(tuple(pos[tuple(x.add[mi[v]][mj[v]] for v in x.elements)] for mj in maps)
                  for mi in maps)
    return TabularAlgebra(Kind.MONOID, len(maps), table), maps


def enumerate_semiring_actions(B: TabularAlgebra, X: TabularAlgebra, *,
                               guard: int = DEFAULT_HOM_GUARD) -> tuple[SemiringAction, ...]:
    """All semiring actions of B on X.

    Candidates for each side are additive maps B -> End_+(X) (so the zero and
    additivity families hold by construction); the multiplicative and mixed
    families are filtered explicitly.
    """
    endp, maps = _additive_endo_monoid(X)
    badd = additive_reduct(B)
    bmul = B.op_table("mul")
    additive = enumerate_homs(badd, endp, guard=guard)
    compose_of = {}

    def comp(mi, mj):  # apply mj, then mi
        key = (mi, mj)
        if key not in compose_of:
            compose_of[key] = tuple(mi[v] for v in mj)
        return compose_of[key]

    lefts = []
    for h in additive:
        phi = [maps[h.map[b]] for b in B.elements]
        if all(phi[bmul[b1][b2]] == comp(phi[b1], phi[b2])
               for b1 in B.elements for b2 in B.elements):
            lefts.append(tuple(phi))
    rights = []
    for h in additive:
        psi = [maps[h.map[b]] for b in B.elements]
        if all(psi[bmul[b1][b2]] == comp(psi[b2], psi[b1])
               for b1 in B.elements for b2 in B.elements):
            rights.append(tuple(psi))

    xmul = X.op_table("mul")
    out = []
    for phi in lefts:
        for psi in rights:
            ok = all(phi[b][xmul[x1][x2]] == xmul[phi[b][x1]][x2]
                     and psi[b][xmul[x1][x2]] == xmul[x1][psi[b][x2]]
                     for b in B.elements for x1 in X.elements for x2 in X.elements)
            if ok:
                ok = all(xmul[x1][phi[b][x2]] == xmul[psi[b][x1]][x2]
                         for x1 in X.elements for b in B.elements for x2 in X.elements)
            if ok:
                ok = all(psi[b2][phi[b1][x]] == phi[b1][psi[b2][x]]
                         for b1 in B.elements for x in X.elements for b2 in B.elements)
            if ok:
                left = phi
                right = tuple(tuple(psi[b][x] for b in B.elements) for x in X.elements)
                out.append(SemiringAction(B, X, left, right))
    return tuple(out)
