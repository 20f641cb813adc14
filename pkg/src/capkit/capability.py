"""Epicenter, capability, and pair-capability decision procedures.

The epicenter is computed element-wise: g lies in Z*(G) exactly when the
induced map M(G) -> M(G/<g>) is injective.  Two engines implement that
monomorphism test — the bar-resolution engine for arbitrary small groups
and the exterior-square engine for abelian groups — and whenever both
apply they must agree exactly (disagreement is a hard error, by design).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd

from .abelian import (AbelianGroupIF, CapabilityVerdict, VarietyDescriptor,
                      abelian_epicenter, coprime_abelianizations,
                      polynilpotent_capable)
from .errors import (EngineDisagreementError, EngineUnavailableError,
                     NotNormalError)
from .groups import (FiniteGroup, Subgroup, abelian_structure, abelianization,
                     center, direct_product, make_subgroup, nilpotency_class,
                     product_index, subgroup_as_group, subgroup_closure,
                     trivial_subgroup)
from .homology import DEFAULT_HOMOLOGY_CAP, is_multiplier_mono
from .zlinalg import AbHom, FPAbelianGroup, IntMatrix, tensor_map


@dataclass(frozen=True)
class PairOfGroups:
    """A group with a distinguished normal subgroup."""

    group: FiniteGroup
    normal: Subgroup

    def __post_init__(self):
        if self.normal.parent is not self.group:
            raise ValueError("subgroup belongs to a different group")
        if not self.normal.is_normal():
            raise NotNormalError("pair requires a normal subgroup")


@dataclass(frozen=True)
class CapabilityReport:
    subject: str
    engine: str  # homology | abelian | classifier
    variety: VarietyDescriptor
    verdict: CapabilityVerdict
    epicenter_factors: tuple | None = None
    epicenter_order: int | None = None
    epicenter_generators: tuple = ()
    wall_ms: float = 0.0

    def __post_init__(self):
        if self.epicenter_order is not None:
            trivial = self.epicenter_order == 1
            if (self.verdict.status == "capable") != trivial:
                raise AssertionError(
                    "verdict inconsistent with computed epicenter")


# ---------------------------------------------------------------------------
# epicenter engines


def _bar_epicenter(g: FiniteGroup, cap=None, force=False) -> Subgroup:
    """Z*(G) via per-element monomorphism tests on the bar engine."""
    key = ("bar_epicenter", cap, force)
    if key in g._cache:
        return g._cache[key]
    members = []
    tested = {}
    for z in center(g).members:
        sub = subgroup_closure(g, [z])
        k = sub.member_set()
        if k not in tested:
            tested[k] = is_multiplier_mono(g, sub, cap=cap, force=force)
        if tested[k]:
            members.append(z)
    # closure check guards the subgroup-ness the theory promises
    epi = make_subgroup(g, members, check=True)
    g._cache[key] = epi
    return epi


def _abelian_epicenter_subgroup(g: FiniteGroup, cap=None) -> Subgroup:
    """Z*(G) for abelian G through the exterior-square engine."""
    st = abelian_structure(g)
    epi = abelian_epicenter(AbelianGroupIF(st.factors), cap=cap)
    members = [st.element_of(coords) for coords in epi.elements()]
    return make_subgroup(g, members, check=True)


def epicenter(g: FiniteGroup, engine: str = "auto", cap=None,
              force: bool = False, abelian_cap=None) -> Subgroup:
    """The epicenter Z*(G) = {g in Z(G) : M(G) -> M(G/<g>) mono}."""
    hcap = DEFAULT_HOMOLOGY_CAP if cap is None else cap
    if engine not in ("auto", "bar", "abelian"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "bar":
        return _bar_epicenter(g, cap=cap, force=force)
    if engine == "abelian":
        if not g.is_abelian:
            raise EngineUnavailableError(
                "exterior-square engine requires an abelian group")
        return _abelian_epicenter_subgroup(g, cap=abelian_cap)
    # auto: run every applicable engine; all must agree
    if g.is_abelian:
        fast = _abelian_epicenter_subgroup(g, cap=abelian_cap)
        if g.order <= hcap or force:
            slow = _bar_epicenter(g, cap=cap, force=force)
            if fast.members != slow.members:
                raise EngineDisagreementError(
                    f"engines disagree on Z* of {g.name or 'group'}: "
                    f"abelian={fast.members} bar={slow.members}")
        return fast
    return _bar_epicenter(g, cap=cap, force=force)


def _epicenter_engine_name(g: FiniteGroup, engine: str) -> str:
    if engine == "bar":
        return "homology"
    if engine == "abelian" or g.is_abelian:
        return "abelian"
    return "homology"


def _subgroup_factors(s: Subgroup):
    """Invariant factors of a (necessarily abelian) central subgroup."""
    sub, _ = subgroup_as_group(s)
    return tuple(abelian_structure(sub).factors)


def is_capable(g: FiniteGroup, engine: str = "auto", cap=None,
               force: bool = False, subject: str = "",
               abelian_cap=None) -> CapabilityReport:
    """Capable iff Z*(G) = 1."""
    t0 = time.perf_counter()
    epi = epicenter(g, engine=engine, cap=cap, force=force,
                    abelian_cap=abelian_cap)
    ms = (time.perf_counter() - t0) * 1000.0
    if epi.is_trivial:
        verdict = CapabilityVerdict("capable", "epicenter trivial")
    else:
        verdict = CapabilityVerdict(
            "not_capable", f"epicenter has order {epi.order}")
    labels = tuple(g.labels[m] for m in epi.members if m != 0)
    return CapabilityReport(
        subject=subject or (g.name or "group"),
        engine=_epicenter_engine_name(g, engine),
        variety=VarietyDescriptor.abelian(),
        verdict=verdict,
        epicenter_factors=_subgroup_factors(epi),
        epicenter_order=epi.order,
        epicenter_generators=labels,
        wall_ms=ms)


def varietal_capability(g: FiniteGroup, v: VarietyDescriptor,
                        engine: str = "auto", cap=None, force: bool = False,
                        subject: str = "",
                        abelian_cap=None) -> CapabilityReport:
    """Capability in a variety: exact for abelian V, classifier otherwise."""
    if v.is_abelian:
        rep = is_capable(g, engine=engine, cap=cap, force=force,
                         subject=subject, abelian_cap=abelian_cap)
        if v != rep.variety:
            rep = CapabilityReport(rep.subject, rep.engine, v, rep.verdict,
                                   rep.epicenter_factors, rep.epicenter_order,
                                   rep.epicenter_generators, rep.wall_ms)
        return rep
    t0 = time.perf_counter()
    if g.is_abelian:
        verdict = polynilpotent_capable(
            AbelianGroupIF(abelian_structure(g).factors), v)
    else:
        verdict = CapabilityVerdict(
            "undetermined",
            "no implemented criterion for a non-abelian group in a "
            "non-abelian variety")
    ms = (time.perf_counter() - t0) * 1000.0
    return CapabilityReport(
        subject=subject or (g.name or "group"),
        engine="classifier", variety=v, verdict=verdict, wall_ms=ms)


# ---------------------------------------------------------------------------
# pairs of groups


def exterior_g_center(p: PairOfGroups, engine: str = "auto", cap=None,
                      force: bool = False, abelian_cap=None) -> Subgroup:
    """Z^_G(N) = Z*(G) intersected with N, as a subgroup of G."""
    epi = epicenter(p.group, engine=engine, cap=cap, force=force,
                    abelian_cap=abelian_cap)
    members = sorted(epi.member_set() & p.normal.member_set())
    return make_subgroup(p.group, members, check=True)


def is_capable_pair(p: PairOfGroups, engine: str = "auto", cap=None,
                    force: bool = False, subject: str = "",
                    abelian_cap=None) -> CapabilityReport:
    """(G, N) capable iff the exterior G-center of N is trivial."""
    t0 = time.perf_counter()
    zc = exterior_g_center(p, engine=engine, cap=cap, force=force,
                           abelian_cap=abelian_cap)
    ms = (time.perf_counter() - t0) * 1000.0
    if zc.is_trivial:
        verdict = CapabilityVerdict("capable",
                                    "exterior G-center of N trivial")
    else:
        verdict = CapabilityVerdict(
            "not_capable", f"exterior G-center has order {zc.order}")
    g = p.group
    labels = tuple(g.labels[m] for m in zc.members if m != 0)
    return CapabilityReport(
        subject=subject or (g.name or "pair"),
        engine=_epicenter_engine_name(g, engine),
        variety=VarietyDescriptor.abelian(),
        verdict=verdict,
        epicenter_factors=_subgroup_factors(zc),
        epicenter_order=zc.order,
        epicenter_generators=labels,
        wall_ms=ms)


# ---------------------------------------------------------------------------
# product theorems as checkers


@dataclass(frozen=True)
class ProductCheck:
    inclusion_holds: bool
    equality_holds: bool
    coprime: bool
    strict: bool  # inclusion proper


def product_epicenter_check(a: FiniteGroup, b: FiniteGroup,
                            engine: str = "auto", cap=None,
                            force: bool = False,
                            abelian_cap=None) -> ProductCheck:
    """Compare Z*(A x B) against Z*(A) x Z*(B)."""
    prod, _, _ = direct_product(a, b)
    left = epicenter(prod, engine=engine, cap=cap, force=force,
                     abelian_cap=abelian_cap)
    ea = epicenter(a, engine=engine, cap=cap, force=force,
                   abelian_cap=abelian_cap)
    eb = epicenter(b, engine=engine, cap=cap, force=force,
                   abelian_cap=abelian_cap)
    right = {product_index(a, b, x, y)
             for x in ea.members for y in eb.members}
    lset = left.member_set()
    return ProductCheck(
        inclusion_holds=lset <= right,
        equality_holds=lset == right,
        coprime=coprime_abelianizations([a, b]),
        strict=lset < right)


@dataclass(frozen=True)
class PairProductCheck:
    equality_holds: bool
    coprime: bool


def pair_product_check(p1: PairOfGroups, p2: PairOfGroups,
                       engine: str = "auto", cap=None, force: bool = False,
                       abelian_cap=None) -> PairProductCheck:
    """Compare Z^_{G1xG2}(N1 x N2) with Z^_{G1}(N1) x Z^_{G2}(N2)."""
    g1, g2 = p1.group, p2.group
    prod, _, _ = direct_product(g1, g2)
    members = [product_index(g1, g2, x, y)
               for x in p1.normal.members for y in p2.normal.members]
    np_prod = PairOfGroups(prod, make_subgroup(prod, members, check=True))
    left = exterior_g_center(np_prod, engine=engine, cap=cap, force=force,
                             abelian_cap=abelian_cap).member_set()
    z1 = exterior_g_center(p1, engine=engine, cap=cap, force=force,
                           abelian_cap=abelian_cap)
    z2 = exterior_g_center(p2, engine=engine, cap=cap, force=force,
                           abelian_cap=abelian_cap)
    right = {product_index(g1, g2, x, y)
             for x in z1.members for y in z2.members}
    return PairProductCheck(
        equality_holds=left == right,
        coprime=coprime_abelianizations([g1, g2]))


def theorem22_zero_map_check(groups, engine: str = "auto", cap=None,
                             force: bool = False, abelian_cap=None) -> bool:
    """Zero-map condition forcing Z*(prod G_i) = prod Z*(G_i).

    For every ordered pair i != j, the composite Z*(G_i) (x) G_j^ab ->
    G_i^ab (x) G_j^ab (restriction of the quotient map, tensored with the
    identity) must vanish.
    """
    data = []
    for g in groups:
        epi = epicenter(g, engine=engine, cap=cap, force=force,
                        abelian_cap=abelian_cap)
        ab, abmap = abelianization(g)
        sub, incl = subgroup_as_group(epi)
        st = abelian_structure(sub)
        cols = [list(abmap.coordinates(incl[b])) for b in st.basis]
        zfp = FPAbelianGroup.from_invariant_factors(st.factors)
        k = ab.ambient_rank
        vmat = IntMatrix.from_columns(cols, k) if cols \
            else IntMatrix([[] for _ in range(k)], 0)
        data.append((ab, AbHom(zfp, ab, vmat)))
    for i, (ab_i, v_i) in enumerate(data):
        for j, (ab_j, _) in enumerate(data):
            if i == j:
                continue
            t = tensor_map(v_i, AbHom.identity(ab_j))
            if not t.is_zero():
                return False
    return True


def corollary33_applicable(groups, v: VarietyDescriptor,
                           max_order=None) -> bool:
    """Coprime abelianizations and product nilpotency class <= c1."""
    if v.kind == "abelian":
        raise ValueError("requires a (poly)nilpotent variety descriptor")
    if not coprime_abelianizations(groups):
        return False
    groups = list(groups)
    total = 1
    for g in groups:
        total *= g.order
    limit = 4096 if max_order is None else max_order
    if total <= limit:
        prod = groups[0]
        for h in groups[1:]:
            prod, _, _ = direct_product(prod, h, max_order=limit)
        cls = nilpotency_class(prod)
    else:
        classes = [nilpotency_class(g) for g in groups]
        if any(c is None for c in classes):
            return False
        # the lower central series of a direct product splits factor-wise,
        # so the product's class is the max of the factor classes
        cls = max(classes, default=1)
    return cls is not None and cls <= v.c1
