"""Verification sweeps over the catalog.

Each suite quantifies one family of claims over every applicable catalog
entry and returns a Report; the CLI `verify` subcommands and the acceptance
tests share these functions.  Iteration order is sorted names throughout, so
two runs with the same inputs produce identical reports.

Theorem-certified identities raise ComputationError when they fail; suites
catch that and record the failure as a red check rather than aborting, so
one broken identity cannot hide the remaining verdicts.
"""

from __future__ import annotations

import itertools

from .actions import (enumerate_monoid_actions, enumerate_semiring_actions,
                      equivariant_homs, point_to_action, restrict_action,
                      roundtrip_point_iso, semidirect_point)
from .adjoints import (DEFAULT_FUNC_GUARD, cofree_mon, cofree_mon_surjective,
                       counit_mon, mediate_mon, pointed_sections,
                       verify_adjunction_srng)
from .algebra import DEFAULT_HOM_GUARD, TabularAlgebra, enumerate_homs
from .catalog import Catalog, build_catalog, coherence_instances
from .coherence import (check_coherence_along, check_kernel_coherence,
                        check_ring_base_schreier, decompose_kernel_word,
                        decompose_product_element, jointly_strongly_epi,
                        jse_in_fibre)
from .errors import ComputationError, StructuralError
from .points import (check_schreier, check_ssfl, enumerate_fibre_morphisms,
                     enumerate_split_epis, fibre_product_point,
                     is_strong_point, pullback_point)
from .reporting import Report
from .serialize import point_morphism_to_dict, point_to_dict

VARIETIES = ("mon", "srng")


def _sized(d: dict[str, TabularAlgebra], max_size: int):
    return [(n, a) for n, a in sorted(d.items()) if a.size <= max_size]


def _schreier_points(cat: Catalog, variety: str):
    return [(n, p) for n, p in sorted(cat.points_of(variety).items())
            if check_schreier(p).is_schreier]


def suite_protomodularity(cat: Catalog | None = None, *, max_size: int = 6,
                          hom_guard: int = DEFAULT_HOM_GUARD,
                          command=("verify", "protomodularity")) -> Report:
    """Schreier implies strong on every enumerated split epi, and the Schreier
    class is stable under pullback and binary fibre product."""
    cat = cat or build_catalog()
    rep = Report(list(command), {"max_size": max_size, "guard_homs": hom_guard})
    for variety in VARIETIES:
        algebras = _sized(cat.algebras(variety), max_size)
        checked = schreier = 0
        bad = []
        for _, A in algebras:
            for _, B in algebras:
                if A.size < B.size:
                    continue
                for p in enumerate_split_epis(A, B, guard=hom_guard):
                    checked += 1
                    if check_schreier(p).is_schreier:
                        schreier += 1
                        if not is_strong_point(p).ok:
                            bad.append(p)
        rep.add(f"schreier-implies-strong[{variety}]", not bad,
                f"split epis={checked}, schreier={schreier}",
                point_to_dict(bad[0]) if bad else None)

        points = _schreier_points(cat, variety)
        pulled = 0
        bad = []
        for _, p in points:
            for _, E in algebras:
                for h in enumerate_homs(E, p.B, guard=hom_guard):
                    pulled += 1
                    q = pullback_point(h, p).point
                    if not check_schreier(q).is_schreier:
                        bad.append(q)
        rep.add(f"pullback-stability[{variety}]", not bad,
                f"pullbacks={pulled} over {len(points)} schreier points",
                point_to_dict(bad[0]) if bad else None)

        fibre = 0
        bad = []
        for _, p1 in points:
            for _, p2 in points:
                if p1.B != p2.B:
                    continue
                fibre += 1
                q = fibre_product_point(p1, p2).point
                if not check_schreier(q).is_schreier:
                    bad.append(q)
        rep.add(f"fibre-product-stability[{variety}]", not bad,
                f"fibre products={fibre}",
                point_to_dict(bad[0]) if bad else None)
    return rep


def suite_ssfl(cat: Catalog | None = None, *,
               hom_guard: int = DEFAULT_HOM_GUARD,
               command=("verify", "ssfl")) -> Report:
    """Split short five lemma on every fibre morphism of Schreier catalog
    points: kernel-bijective implies bijective."""
    cat = cat or build_catalog()
    rep = Report(list(command), {"guard_homs": hom_guard})
    for variety in VARIETIES:
        points = _schreier_points(cat, variety)
        checked = 0
        bad = []
        for _, p1 in points:
            for _, p2 in points:
                if p1.B != p2.B:
                    continue
                for m in enumerate_fibre_morphisms(p1, p2, guard=hom_guard):
                    checked += 1
                    if not check_ssfl(m):
                        bad.append(m)
        rep.add(f"ssfl[{variety}]", not bad, f"fibre morphisms={checked}",
                point_morphism_to_dict(bad[0]) if bad else None)
    return rep


def suite_roundtrip(cat: Catalog | None = None, *,
                    hom_guard: int = DEFAULT_HOM_GUARD,
                    command=("verify", "roundtrip")) -> Report:
    """The action/point equivalence: action -> semidirect point -> action is
    the identity on tables, point -> action -> semidirect point is isomorphic
    to the original, and corresponding hom-sets have equal cardinality."""
    cat = cat or build_catalog()
    rep = Report(list(command), {"guard_homs": hom_guard})
    for variety, pool in (("mon", cat.monoid_actions), ("srng", cat.semiring_actions)):
        actions = sorted(pool.items())
        bad = []
        for name, a in actions:
            back = point_to_action(semidirect_point(a))
            if back != a:
                bad.append(name)
        rep.add(f"action-roundtrip[{variety}]", not bad,
                f"actions={len(actions)}", None if not bad else
                {"failing": bad})

        points = _schreier_points(cat, variety)
        bad = []
        for name, p in points:
            try:
                roundtrip_point_iso(p)
            except ComputationError as exc:
                bad.append((name, str(exc)))
        rep.add(f"point-roundtrip[{variety}]", not bad,
                f"schreier points={len(points)}",
                None if not bad else {"failing": [n for n, _ in bad],
                                      "first": bad[0][1]})

        pairs = checked = 0
        bad = []
        for n1, a1 in actions:
            for n2, a2 in actions:
                if a1.B != a2.B:
                    continue
                pairs += 1
                t = len(equivariant_homs(a1, a2, guard=hom_guard))
                m = len(enumerate_fibre_morphisms(semidirect_point(a1),
                                                  semidirect_point(a2),
                                                  guard=hom_guard))
                checked += 1
                if t != m:
                    bad.append((n1, n2, t, m))
        rep.add(f"homset-cardinalities[{variety}]", not bad,
                f"action pairs={pairs}",
                None if not bad else {"failing": bad[0]})
    return rep


def suite_adjunction_mon(cat: Catalog | None = None, *, base_max: int = 3,
                         source_max: int = 4, carrier_max: int = 4,
                         surj_base_max: int = 4,
                         hom_guard: int = DEFAULT_HOM_GUARD,
                         func_guard: int = DEFAULT_FUNC_GUARD,
                         command=("verify", "adjunction", "--variety", "mon")
                         ) -> Report:
    """The relative right adjoint for monoid actions.

    First sweep: every hom h: E -> B between catalog monoids (|E| <= 4,
    |B| <= 3), every action F on |M| <= 4 and G on |S| <= 4.  Checks, per
    triple: |Hom_E(h*G, F)| = |Hom_B(G, L(B,M))|, composing with the counit
    is a bijection from the right-hand side onto the left (existence and
    uniqueness of the mediating map at once), and the mediating formula
    produces exactly that unique preimage.

    Second sweep: for surjective h the submonoid characterization: every
    pointed set-section yields the same submonoid, isomorphic to L(B, M).
    """
    cat = cat or build_catalog()
    rep = Report(list(command),
                 {"base_max": base_max, "source_max": source_max,
                  "carrier_max": carrier_max, "surj_base_max": surj_base_max,
                  "guard_homs": hom_guard, "guard_functions": func_guard})
    monoids = sorted(cat.monoids.items())
    carriers = _sized(cat.monoids, carrier_max)
    action_pool: dict[TabularAlgebra, tuple] = {}

    def actions_on(base: TabularAlgebra):
        if base not in action_pool:
            acts = []
            for _, X in carriers:
                acts.extend(enumerate_monoid_actions(base, X, guard=hom_guard))
            action_pool[base] = tuple(acts)
        return action_pool[base]

    triples = 0
    card_bad = bij_bad = mediate_bad = 0
    first_failure = ""
    for _, E in _sized(cat.monoids, source_max):
        for _, B in _sized(cat.monoids, base_max):
            for h in enumerate_homs(E, B, guard=hom_guard):
                for F in actions_on(E):
                    c = cofree_mon(h, F, guard=func_guard)
                    eps = counit_mon(c)
                    for G in actions_on(B):
                        triples += 1
                        lhs = equivariant_homs(restrict_action(h, G), F,
                                               guard=hom_guard)
                        rhs = equivariant_homs(G, c.action, guard=hom_guard)
                        if len(lhs) != len(rhs):
                            card_bad += 1
                            first_failure = first_failure or (
                                f"hom-set sizes {len(lhs)} != {len(rhs)}")
                            continue
                        composed = {}
                        for gamma in rhs:
                            key = tuple(eps.map[v] for v in gamma.map)
                            composed.setdefault(key, []).append(gamma)
                        lhs_maps = {t.map for t in lhs}
                        if (set(composed) != lhs_maps
                                or any(len(v) != 1 for v in composed.values())):
                            bij_bad += 1
                            first_failure = first_failure or (
                                "counit composition is not a bijection onto the hom-set")
                            continue
                        for beta in lhs:
                            try:
                                gamma = mediate_mon(c, G, beta, check_unique=False)
                            except ComputationError as exc:
                                mediate_bad += 1
                                first_failure = first_failure or str(exc)
                                break
                            if gamma.map != composed[beta.map][0].map:
                                mediate_bad += 1
                                first_failure = first_failure or (
                                    "mediating formula disagrees with the enumerated inverse")
                                break
    ok = card_bad == bij_bad == mediate_bad == 0
    rep.add("cofree-adjunction[mon]", ok,
            f"triples={triples}" if ok else
            f"triples={triples}, cardinality={card_bad}, bijection={bij_bad}, "
            f"mediating={mediate_bad}: {first_failure}")

    instances = 0
    iso_bad = indep_bad = 0
    first_failure = ""
    for _, E in monoids:
        for _, B in _sized(cat.monoids, surj_base_max):
            for h in enumerate_homs(E, B, guard=hom_guard):
                if not h.is_surjective():
                    continue
                for F in actions_on(E):
                    members_seen = None
                    for sect in pointed_sections(h):
                        instances += 1
                        sc = cofree_mon_surjective(h, F, sect, guard=func_guard)
                        if not sc.is_isomorphism:
                            iso_bad += 1
                            first_failure = first_failure or (sc.failure or "not iso")
                        if members_seen is None:
                            members_seen = sc.members
                        elif members_seen != sc.members:
                            indep_bad += 1
                            first_failure = first_failure or (
                                "submonoid depends on the chosen section")
    ok = iso_bad == indep_bad == 0
    rep.add("surjective-cofree[mon]", ok,
            f"(h, F, section) instances={instances}" if ok else
            f"instances={instances}, iso failures={iso_bad}, "
            f"section dependence={indep_bad}: {first_failure}")
    return rep


def suite_adjunction_srng(cat: Catalog | None = None, *, source_max: int = 4,
                          carrier_max: int = 4,
                          hom_guard: int = DEFAULT_HOM_GUARD,
                          command=("verify", "adjunction", "--variety", "srng")
                          ) -> Report:
    """The relative right adjoint for semiring actions, along every surjective
    hom between catalog semirings: hom-set bijection via corestriction to the
    invariant subalgebra, naturality on sampled squares, functoriality."""
    cat = cat or build_catalog()
    rep = Report(list(command),
                 {"source_max": source_max, "carrier_max": carrier_max,
                  "guard_homs": hom_guard})
    carriers = _sized(cat.semirings, carrier_max)
    action_pool: dict[TabularAlgebra, tuple] = {}

    def actions_on(base: TabularAlgebra):
        if base not in action_pool:
            acts = []
            for _, X in carriers:
                acts.extend(enumerate_semiring_actions(base, X, guard=hom_guard))
            action_pool[base] = tuple(acts)
        return action_pool[base]

    triples = 0
    bad = 0
    first_failure = ""
    for _, E in _sized(cat.semirings, source_max):
        for _, B in _sized(cat.semirings, source_max):
            for h in enumerate_homs(E, B, guard=hom_guard):
                if not h.is_surjective():
                    continue
                for F in actions_on(E):
                    for G in actions_on(B):
                        triples += 1
                        adj = verify_adjunction_srng(h, G, F)
                        if not adj.ok:
                            bad += 1
                            first_failure = first_failure or (adj.failure or "")
    rep.add("invariants-adjunction[srng]", bad == 0,
            f"triples={triples}" if bad == 0 else
            f"triples={triples}, failures={bad}: {first_failure}")
    return rep


def suite_coherence(cat: Catalog | None = None, *, variety: str | None = None,
                    along_max: int = 6, word_max: int = 3,
                    hom_guard: int = DEFAULT_HOM_GUARD,
                    command=("verify", "coherence")) -> Report:
    """Kernel coherence and coherence along every enumerated change of base,
    on every catalog coherence instance; for semirings, the product and word
    decompositions with their vanishing certificates on all valid inputs."""
    cat = cat or build_catalog()
    rep = Report(list(command),
                 {"variety": variety or "both", "along_max": along_max,
                  "word_max": word_max, "guard_homs": hom_guard})
    for var in VARIETIES if variety is None else (variety,):
        instances = coherence_instances(cat, var, guard=hom_guard)
        rep.add(f"catalog-instances[{var}]", len(instances) > 0,
                f"instances={len(instances)}")

        bad = [name for name, inst in instances
               if not check_kernel_coherence(inst).ok]
        rep.add(f"kernel-coherence[{var}]", not bad,
                f"instances={len(instances)}",
                None if not bad else {"failing": bad})

        bad = [name for name, inst in instances
               if jse_in_fibre(inst).ok
               != jointly_strongly_epi(inst.f.g, inst.g.g).ok]
        rep.add(f"fibre-jse-agreement[{var}]", not bad,
                f"instances={len(instances)}",
                None if not bad else {"failing": bad})

        algebras = _sized(cat.algebras(var), along_max)
        pulled = 0
        bad = []
        for name, inst in instances:
            for _, E in algebras:
                for h in enumerate_homs(E, inst.base, guard=hom_guard):
                    pulled += 1
                    if not check_coherence_along(h, inst).ok:
                        bad.append((name, h.map))
        rep.add(f"coherence-along[{var}]", not bad,
                f"pullbacks={pulled} over {len(instances)} instances",
                None if not bad else {"failing": bad[0][0], "h": list(bad[0][1])})

        if var != "srng":
            continue
        decomposed = skipped = 0
        bad = []
        for name, inst in instances:
            A, C = inst.f.source.A, inst.g.source.A
            for a in A.elements:
                for c in C.elements:
                    for order in ("fg", "gf"):
                        try:
                            decompose_product_element(inst, a, c, order=order)
                        except StructuralError:
                            skipped += 1
                        except ComputationError as exc:
                            bad.append((name, a, c, order, str(exc)))
                        else:
                            decomposed += 1
        rep.add("decompose-product[srng]", not bad,
                f"decomposed={decomposed}, outside hypothesis={skipped}",
                None if not bad else {"failing": bad[0][:4], "error": bad[0][4]})

        decomposed = skipped = 0
        bad = []
        for name, inst in instances:
            A, C = inst.f.source.A, inst.g.source.A
            alphabet = [("f", a) for a in A.elements] + [("g", c) for c in C.elements]
            for n in range(1, word_max + 1):
                for word in itertools.product(alphabet, repeat=n):
                    try:
                        decompose_kernel_word(inst, word)
                    except StructuralError:
                        skipped += 1
                    except ComputationError as exc:
                        bad.append((name, word, str(exc)))
                    else:
                        decomposed += 1
        rep.add("decompose-words[srng]", not bad,
                f"decomposed={decomposed}, outside hypothesis={skipped}",
                None if not bad else {"failing": str(bad[0][:2]), "error": bad[0][2]})
    return rep


def suite_ring_base(cat: Catalog | None = None, *, max_size: int = 8,
                    hom_guard: int = DEFAULT_HOM_GUARD,
                    command=("verify", "ring-base")) -> Report:
    """Every split epi from a catalog semiring onto the two-element ring is
    Schreier; the precondition rejects the boolean semiring, which does admit
    a non-Schreier split epi."""
    cat = cat or build_catalog()
    rep = Report(list(command), {"max_size": max_size, "guard_homs": hom_guard})
    sources = sorted(cat.semirings.items())
    ring = cat.semirings["z2_ring"]
    result = check_ring_base_schreier(ring, sources, guard=hom_guard,
                                      max_size=max_size)
    rep.add("ring-base-schreier[z2_ring]", result.ok,
            f"split epis={result.checked} from {len(sources)} semirings",
            None if result.ok else
            point_to_dict(result.violations[0].point))

    try:
        check_ring_base_schreier(cat.semirings["bool_rig"], sources,
                                 guard=hom_guard, max_size=max_size)
    except StructuralError as exc:
        rep.add("ring-base-precondition[bool_rig]", True, str(exc))
    else:
        rep.add("ring-base-precondition[bool_rig]", False,
                "boolean semiring accepted despite not being a ring")

    w = check_schreier(cat.points["diag_bool"])
    rep.add("non-schreier-over-bool_rig", not w.is_schreier, w.describe())
    return rep


def run_all(cat: Catalog | None = None, *, command=("verify", "all")) -> Report:
    cat = cat or build_catalog()
    rep = Report(list(command), {})
    for suite in (suite_protomodularity, suite_ssfl, suite_roundtrip,
                  suite_adjunction_mon, suite_adjunction_srng,
                  suite_coherence, suite_ring_base):
        rep.extend(suite(cat))
    return rep
