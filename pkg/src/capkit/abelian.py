"""Capability engine for finite abelian groups in invariant-factor form.

The multiplier of an abelian group A is its exterior square Lambda^2 A, and
an element g lies in the epicenter exactly when Lambda^2 A -> Lambda^2
(A/<g>) is injective.  Because the relation lattice of Lambda^2 A is
diagonal on the wedge basis, that membership test collapses to per-
coordinate divisibility, which lets the element scan run vectorized; the
diagonal shape is read off the actual presentation, not assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .errors import GroupSpecError, OrderCapExceeded
from .groups import FiniteGroup, abelian_structure, abelianization
from .zlinalg import (AbHom, FPAbelianGroup, IntMatrix, exterior_square,
                      exterior_square_map, hom_is_injective, wedge_pairs)

#: Element scans are linear in the group order; keep them desk-scale.
DEFAULT_ABELIAN_CAP = 10 ** 6


@dataclass(frozen=True)
class AbelianGroupIF:
    """Finite abelian group as invariant factors n1, n2, ... with n_{i+1} | n_i.

    Elements are residue tuples (g1, ..., gk) with 0 <= gi < ni.
    """

    factors: tuple

    def __post_init__(self):
        fs = tuple(int(n) for n in self.factors)
        object.__setattr__(self, "factors", fs)
        for n in fs:
            if n < 2:
                raise GroupSpecError("invariant factors must be >= 2 "
                                     "(drop trailing ones)")
        for a, b in zip(fs, fs[1:]):
            if a % b:
                raise GroupSpecError(
                    f"invariant factors must form a divisibility chain "
                    f"(descending): {list(fs)}")

    @classmethod
    def from_group(cls, g: FiniteGroup) -> "AbelianGroupIF":
        return cls(abelian_structure(g).factors)

    @property
    def k(self) -> int:
        return len(self.factors)

    def order(self) -> int:
        n = 1
        for d in self.factors:
            n *= d
        return n

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def fp(self) -> FPAbelianGroup:
        return FPAbelianGroup.from_invariant_factors(self.factors)

    def elements(self):
        return itertools.product(*(range(n) for n in self.factors))

    def __repr__(self):
        return f"AbelianGroupIF({list(self.factors)})"


# ---------------------------------------------------------------------------
# variety descriptors and verdicts


@dataclass(frozen=True)
class VarietyDescriptor:
    """Abelian / nilpotent(c) / polynilpotent(c1,...,cs) variety.

    The class row is stored uniformly; abelian is the row (1,).
    """

    kind: str
    classes: tuple

    def __post_init__(self):
        cs = tuple(int(c) for c in self.classes)
        object.__setattr__(self, "classes", cs)
        if self.kind not in ("abelian", "nilpotent", "polynilpotent"):
            raise GroupSpecError(f"unknown variety kind {self.kind!r}")
        if not cs or any(c < 1 for c in cs):
            raise GroupSpecError("variety class row must be positive integers")
        if self.kind == "abelian" and cs != (1,):
            raise GroupSpecError("abelian variety has class row (1,)")
        if self.kind == "nilpotent" and len(cs) != 1:
            raise GroupSpecError("nilpotent variety takes a single class")

    @classmethod
    def abelian(cls):
        return cls("abelian", (1,))

    @classmethod
    def nilpotent(cls, c):
        return cls("nilpotent", (c,))

    @classmethod
    def polynilpotent(cls, *classes):
        return cls("polynilpotent", tuple(classes))

    @classmethod
    def parse(cls, text: str) -> "VarietyDescriptor":
        """Parse 'abelian' | 'N:<c>' | 'PN:<c1,c2,...>'."""
        t = text.strip()
        if t == "abelian":
            return cls.abelian()
        kind, sep, arg = t.partition(":")
        if not sep:
            raise GroupSpecError(f"malformed variety spec {text!r}")
        try:
            classes = tuple(int(x) for x in arg.split(","))
        except ValueError as exc:
            raise GroupSpecError(f"bad class row in variety {text!r}") from exc
        if kind == "N":
            if len(classes) != 1:
                raise GroupSpecError("N: takes a single class")
            return cls.nilpotent(classes[0])
        if kind == "PN":
            return cls.polynilpotent(*classes)
        raise GroupSpecError(f"unknown variety kind in {text!r}")

    @property
    def t(self) -> int:
        return len(self.classes)

    @property
    def c1(self) -> int:
        return self.classes[0]

    @property
    def is_abelian(self) -> bool:
        return self.classes == (1,)

    def label(self) -> str:
        if self.is_abelian and self.kind == "abelian":
            return "abelian"
        if self.kind == "nilpotent":
            return f"N:{self.classes[0]}"
        return "PN:" + ",".join(str(c) for c in self.classes)


@dataclass(frozen=True)
class CapabilityVerdict:
    status: str  # capable | not_capable | undetermined
    criterion: str

    def __post_init__(self):
        if self.status not in ("capable", "not_capable", "undetermined"):
            raise ValueError(f"bad verdict status {self.status!r}")


# ---------------------------------------------------------------------------
# multiplier and epicenter


def abelian_multiplier(a: AbelianGroupIF) -> FPAbelianGroup:
    """M(A) = Lambda^2 A, built from the presentation (no gcd shortcut)."""
    return exterior_square(a.fp())


@dataclass(frozen=True)
class AbelianEpicenter:
    """The epicenter of an invariant-factor group, as a coordinate sublattice.

    The element set is {g : strides[i] divides g[i] for all i}; strides[i]
    divides moduli[i], so this is a subgroup by construction (and checked).
    """

    moduli: tuple
    strides: tuple

    def order(self) -> int:
        n = 1
        for m, s in zip(self.moduli, self.strides):
            n *= m // s
        return n

    @property
    def is_trivial(self) -> bool:
        return all(m == s for m, s in zip(self.moduli, self.strides))

    @property
    def is_whole(self) -> bool:
        return all(s == 1 for s in self.strides)

    def invariant_factors(self):
        quots = [m // s for m, s in zip(self.moduli, self.strides)]
        k = len(quots)
        return FPAbelianGroup(k, IntMatrix.diagonal(quots, k, k)).invariant_factors()

    def contains(self, coords) -> bool:
        return all(c % s == 0 for c, s in zip(coords, self.strides))

    def generators(self):
        out = []
        for i, (m, s) in enumerate(zip(self.moduli, self.strides)):
            if s != m:
                g = [0] * len(self.moduli)
                g[i] = s
                out.append(tuple(g))
        return out

    def elements(self):
        ranges = [range(0, m, s) for m, s in zip(self.moduli, self.strides)]
        return itertools.product(*ranges)


def _wedge_lattice_diagonal(moduli):
    """Diagonal of the Lambda^2 relation lattice, verified from the echelon.

    Returns None when the lattice is not diagonal on the wedge basis (it
    always is for diagonal relations; the check guards that assumption).
    """
    k = len(moduli)
    fp = FPAbelianGroup(k, IntMatrix.diagonal(moduli, k, k))
    lam = exterior_square(fp)
    ech = lam._echelon
    w = len(wedge_pairs(k))
    if ech.rank != w or list(ech.pivot_rows) != list(range(w)):
        return None
    for j in range(ech.rank):
        for i in range(w):
            if i != j and ech.h[i][j]:
                return None
    return [ech.h[j][j] for j in range(w)]


def element_in_epicenter(moduli, g) -> bool:
    """Direct test: is Lambda^2 A -> Lambda^2 (A/<g>) injective?

    Presentation-level reference implementation; the vectorized scan in
    abelian_epicenter must agree with this on every element.
    """
    k = len(moduli)
    rel = IntMatrix.diagonal(moduli, k, k)
    a = FPAbelianGroup(k, rel)
    qrel = rel.hstack(IntMatrix.from_columns([[int(x) for x in g]], k))
    q = FPAbelianGroup(k, qrel)
    f = AbHom(a, q, IntMatrix.identity(k))
    return hom_is_injective(exterior_square_map(f))


def epicenter_strides(moduli):
    """strides[i] = least s with s*e_i in the epicenter (per-coordinate).

    Works for any list of cyclic moduli (the diagonal presentation need not
    be in invariant-factor form), which is what lets direct-sum epicenters
    be compared coordinate-by-coordinate without re-canonicalizing.
    """
    k = len(moduli)
    if k == 0:
        return ()
    if k == 1:
        return (1,)  # Lambda^2 of a cyclic group is trivial: everything injects
    diag = _wedge_lattice_diagonal(moduli)
    pairs = wedge_pairs(k)
    if diag is not None:
        d = {p: diag[n] for n, p in enumerate(pairs)}
        strides = []
        for i in range(k):
            s = 1
            for j in range(k):
                if j != i:
                    s = lcm(s, d[(min(i, j), max(i, j))])
            strides.append(gcd(s, moduli[i]))
        return tuple(strides)
    # non-diagonal lattice: fall back to a per-coordinate divisor search
    strides = []
    for i in range(k):
        s = moduli[i]
        for div in sorted(_divisors(moduli[i])):
            g = [0] * k
            g[i] = div
            if element_in_epicenter(moduli, g):
                s = div
                break
        strides.append(s)
    return tuple(strides)


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return out


def abelian_epicenter(a: AbelianGroupIF, cap=None) -> AbelianEpicenter:
    """Z*(A) = {g : Lambda^2 A -> Lambda^2 (A/<g>) injective}."""
    cap = DEFAULT_ABELIAN_CAP if cap is None else cap
    if a.order() > cap:
        raise OrderCapExceeded(
            f"abelian group order {a.order()} exceeds engine cap {cap}")
    strides = epicenter_strides(a.factors)
    epi = AbelianEpicenter(a.factors, strides)
    _assert_subgroup(epi)
    return epi


def _assert_subgroup(epi: AbelianEpicenter, limit=256):
    """Runtime guard: the returned element set must be closed as a subgroup."""
    for m, s in zip(epi.moduli, epi.strides):
        if m % s:
            raise AssertionError("epicenter strides must divide the moduli")
    if epi.order() <= limit:
        elems = list(epi.elements())
        for x in elems:
            neg = tuple((-c) % m for c, m in zip(x, epi.moduli))
            if not epi.contains(neg):
                raise AssertionError("epicenter not closed under inverse")
        for x in elems:
            for y in elems:
                z = tuple((cx + cy) % m
                          for cx, cy, m in zip(x, y, epi.moduli))
                if not epi.contains(z):
                    raise AssertionError("epicenter not closed under product")


# ---------------------------------------------------------------------------
# capability classifiers


def baer_capable(a: AbelianGroupIF) -> CapabilityVerdict:
    """Classical criterion: capable iff k >= 2 and n1 = n2."""
    if a.is_trivial:
        return CapabilityVerdict("capable", "trivial group")
    if a.k >= 2 and a.factors[0] == a.factors[1]:
        return CapabilityVerdict("capable", "n1 = n2 with k >= 2")
    return CapabilityVerdict("not_capable",
                             "k = 1 or n1 > n2 (repeated top factor required)")


def polynilpotent_capable(a: AbelianGroupIF,
                          v: VarietyDescriptor) -> CapabilityVerdict:
    """Tri-state classifier for varietal capability of abelian groups.

    Rules are applied in order; anything outside them is undetermined
    rather than extrapolated.
    """
    n = a.factors
    if a.is_trivial:
        return CapabilityVerdict("capable", "rule (a): trivial group")
    if a.k == 1:
        return CapabilityVerdict(
            "not_capable", "rule (b): nontrivial cyclic, any variety")
    if n[0] == n[1] and (v.t == 1 or v.c1 >= 2):
        return CapabilityVerdict(
            "capable", "rule (c): n1 = n2 and (t = 1 or c1 >= 2)")
    if a.k >= 3 and n[0] == n[1] == n[2] and v.t >= 2 and v.c1 == 1:
        return CapabilityVerdict(
            "capable", "rule (d): n1 = n2 = n3 with t >= 2, c1 = 1")
    if v.is_abelian and n[0] != n[1]:
        return CapabilityVerdict(
            "not_capable", "rule (e): abelian variety with n1 > n2")
    return CapabilityVerdict(
        "undetermined", "rule (f): outside every implemented criterion")


def coprime_abelianizations(groups) -> bool:
    """Are the abelianization orders pairwise coprime?"""
    orders = [abelianization(g)[0].order() for g in groups]
    return all(gcd(a, b) == 1
               for a, b in itertools.combinations(orders, 2))


# ---------------------------------------------------------------------------
# enumeration of abelian groups by order


def _prime_factorization(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _partitions(n):
    """Partitions of n as non-increasing tuples."""

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    return rec(n, n)


def invariant_factor_lists(order):
    """All invariant-factor lists (descending divisibility) of a given order."""
    if order < 1:
        raise ValueError("order must be positive")
    if order == 1:
        return [()]
    primes = _prime_factorization(order)
    per_prime = [[p] * 0 or [(p, part) for part in _partitions(e)]
                 for p, e in primes]
    out = []
    for combo in itertools.product(*per_prime):
        k = max(len(part) for _, part in combo)
        factors = []
        for i in range(k):
            f = 1
            for p, part in combo:
                if i < len(part):
                    f *= p ** part[i]
            factors.append(f)
        out.append(tuple(factors))
    return sorted(out)


def abelian_groups_up_to(max_order):
    """(order, invariant factors) for every abelian group of order <= cap."""
    for n in range(1, max_order + 1):
        for fs in invariant_factor_lists(n):
            yield n, fs
