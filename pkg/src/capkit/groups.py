"""Concrete finite groups as Cayley tables.

Groups are stored as full order x order index tables with the identity at
index 0.  Everything is immutable after construction and all operations are
pure functions, so values are safe to share between threads.

Group-spec grammar (shared with the CLI):

    cyclic:<n> | abelian:[n1,n2,...] | dihedral:<n> | quaternion:8
    | perm:<cycles>(;<cycles>)* | <spec> x <spec>
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .errors import GroupSpecError, NotNormalError, OrderCapExceeded

#: Hard cap on constructed Cayley tables.  Raised well above the homology
#: engine's own cap (24) because the abelian engine happily handles products
#: of order a few thousand.
DEFAULT_MAX_ORDER = 4096

_FULL_ASSOC_LIMIT = 64


class FiniteGroup:
    """A finite group: element indices 0..order-1 with a Cayley table.

    ``table[i, j]`` is the index of the product of elements i and j; the
    identity is element 0.
    """

    __slots__ = ("table", "labels", "name", "order", "identity_index",
                 "inverse", "_cache")

    def __init__(self, table, labels=None, name="", validate=True):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValueError("Cayley table must be square")
        n = table.shape[0]
        self.table = table
        self.order = n
        self.identity_index = 0
        self.name = name or f"group<{n}>"
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValueError("one label per element required")
        self.labels = tuple(str(x) for x in labels)
        inv = np.argmin(np.abs(table), axis=1).astype(np.int32)
        self.inverse = inv
        self._cache = {}
        if validate:
            self._validate()
        self.table.setflags(write=False)
        self.inverse.setflags(write=False)

    def _validate(self):
        t = self.table
        n = self.order
        rng = np.arange(n, dtype=np.int32)
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries out of range")
        if not (np.array_equal(t[0], rng) and np.array_equal(t[:, 0], rng)):
            raise ValueError("element 0 is not a two-sided identity")
        if not (np.array_equal(np.sort(t, axis=1), np.tile(rng, (n, 1)))
                and np.array_equal(np.sort(t, axis=0), np.tile(rng[:, None], (1, n)))):
            raise ValueError("table is not a Latin square")
        inv = self.inverse
        if not (np.array_equal(t[rng, inv], np.zeros(n, np.int32))
                and np.array_equal(t[inv, rng], np.zeros(n, np.int32))):
            raise ValueError("missing two-sided inverses")
        if n <= _FULL_ASSOC_LIMIT:
            # left[x,y,z] = t[t[x,y],z]; right[x,y,z] = t[x,t[y,z]]
            left = t[t, :]
            right = t[:, t]
            if not np.array_equal(left, right):
                raise ValueError("table is not associative")
        else:
            rngen = np.random.default_rng(n * 2654435761 % (2**32))
            remaining = 10 * n * n
            while remaining > 0:
                m = min(remaining, 1 << 20)
                i = rngen.integers(0, n, m)
                j = rngen.integers(0, n, m)
                k = rngen.integers(0, n, m)
                if not np.array_equal(t[t[i, j], k], t[i, t[j, k]]):
                    raise ValueError("table is not associative (sampled)")
                remaining -= m

    # -- basic element arithmetic -------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        return int(self.inverse[i])

    def power(self, i: int, e: int) -> int:
        n = self.element_order(i)
        e %= n
        acc = 0
        base = i
        while e:
            if e & 1:
                acc = int(self.table[acc, base])
            base = int(self.table[base, base])
            e >>= 1
        return acc

    def element_order(self, i: int) -> int:
        x = i
        n = 1
        while x != 0:
            x = int(self.table[x, i])
            n += 1
        return n

    def element_orders(self):
        key = "element_orders"
        if key not in self._cache:
            self._cache[key] = tuple(self.element_order(i) for i in range(self.order))
        return self._cache[key]

    @property
    def is_abelian(self) -> bool:
        if "abelian" not in self._cache:
            self._cache["abelian"] = bool(np.array_equal(self.table, self.table.T))
        return self._cache["abelian"]

    def exponent(self) -> int:
        e = 1
        for o in self.element_orders():
            e = e * o // _gcd(e, o)
        return e

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its sorted member indices inside a parent group."""

    parent: FiniteGroup
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(int(m) for m in self.members)))

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def is_trivial(self) -> bool:
        return self.members == (0,)

    @property
    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def contains(self, i: int) -> bool:
        return int(i) in set(self.members)

    def member_set(self):
        return frozenset(self.members)

    def is_normal(self) -> bool:
        g = self.parent
        mem = np.array(self.members, dtype=np.int32)
        x = g.table[:, mem]                     # (n, |N|): g * n
        conj = g.table[x, g.inverse[:, None]]   # g * n * g^-1
        return bool(np.isin(conj, mem).all())

    def is_central(self) -> bool:
        z = center(self.parent).member_set()
        return all(m in z for m in self.members)


def make_subgroup(parent: FiniteGroup, members, check=True) -> Subgroup:
    s = Subgroup(parent, tuple(members))
    if check:
        mem = set(s.members)
        if 0 not in mem:
            raise ValueError("subgroup must contain the identity")
        for a in s.members:
            if int(parent.inverse[a]) not in mem:
                raise ValueError("subgroup not closed under inverses")
            for b in s.members:
                if int(parent.table[a, b]) not in mem:
                    raise ValueError("subgroup not closed under products")
    return s


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, (0,))


def whole_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)))


class GroupHom:
    """A homomorphism between Cayley-table groups, given element-wise."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images, validate=True):
        images = np.ascontiguousarray(np.asarray(images, dtype=np.int32))
        if images.shape != (source.order,):
            raise ValueError("one image per source element required")
        self.source = source
        self.target = target
        self.images = images
        if validate:
            if images[0] != 0:
                raise ValueError("identity must map to identity")
            lhs = images[source.table]
            rhs = target.table[images[:, None], images[None, :]]
            if not np.array_equal(lhs, rhs):
                raise ValueError("map is not a homomorphism")
        self.images.setflags(write=False)

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner."""
        return GroupHom(inner.source, self.target, self.images[inner.images],
                        validate=False)

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(np.nonzero(self.images == 0)[0]))

    def image_members(self):
        return tuple(sorted(set(int(x) for x in self.images)))


# ---------------------------------------------------------------------------
# constructions


def cyclic_group(n: int, max_order=None) -> FiniteGroup:
    _check_cap(n, max_order)
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(table, [str(i) for i in range(n)], name=f"cyclic:{n}")


def abelian_group(factors, max_order=None) -> FiniteGroup:
    """Direct sum of cyclic groups Z_{n1} x Z_{n2} x ..."""
    factors = [int(n) for n in factors]
    if not factors or any(n < 1 for n in factors):
        raise GroupSpecError("abelian factors must be positive integers")
    order = 1
    for n in factors:
        order *= n
    _check_cap(order, max_order)
    shape = tuple(factors)
    tuples = list(iproduct(*(range(n) for n in factors)))
    index = {t: i for i, t in enumerate(tuples)}
    table = np.zeros((order, order), dtype=np.int32)
    for i, a in enumerate(tuples):
        for j, b in enumerate(tuples):
            table[i, j] = index[tuple((x + y) % n for x, y, n in zip(a, b, shape))]
    labels = ["(" + ",".join(map(str, t)) + ")" for t in tuples]
    return FiniteGroup(table, labels, name="abelian:[%s]" % ",".join(map(str, factors)))


def dihedral_group(n: int, max_order=None) -> FiniteGroup:
    """Dihedral group of order 2n (symmetries of the n-gon)."""
    if n < 1:
        raise GroupSpecError("dihedral parameter must be >= 1")
    order = 2 * n
    _check_cap(order, max_order)

    def idx(a, f):
        return a + n * f

    table = np.zeros((order, order), dtype=np.int32)
    for a in range(n):
        for f in range(2):
            for b in range(n):
                for g in range(2):
                    a2 = (a + b) % n if f == 0 else (a - b) % n
                    table[idx(a, f), idx(b, g)] = idx(a2, (f + g) % 2)
    labels = [f"r{a}" for a in range(n)] + [f"r{a}s" for a in range(n)]
    return FiniteGroup(table, labels, name=f"dihedral:{n}")


_Q8 = {
    # 1, -1, i, -i, j, -j, k, -k
    ("1", "1"): "1", ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
    ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
    ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
}


def quaternion_group(max_order=None) -> FiniteGroup:
    _check_cap(8, max_order)
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    index = {u: n for n, u in enumerate(units)}

    def mul(a, b):
        sign = 1
        if a.startswith("-"):
            sign, a = -sign, a[1:]
        if b.startswith("-"):
            sign, b = -sign, b[1:]
        if a == "1":
            r = b
        elif b == "1":
            r = a
        else:
            r = _Q8[(a, b)]
        if r.startswith("-"):
            sign, r = -sign, r[1:]
        return "-" + r if sign < 0 else r

    table = np.zeros((8, 8), dtype=np.int32)
    for i, a in enumerate(units):
        for j, b in enumerate(units):
            table[i, j] = index[mul(a, b)]
    return FiniteGroup(table, units, name="quaternion:8")


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_permutation(text: str):
    """Parse disjoint-cycle notation like "(1 2 3)(4 5)" into a mapping."""
    body = text.strip()
    if not body:
        raise GroupSpecError("empty permutation")
    if body.replace("(", "").replace(")", "").strip() == "":
        raise GroupSpecError(f"no cycles in permutation {text!r}")
    covered = _CYCLE_RE.sub("", body).strip()
    if covered:
        raise GroupSpecError(f"unparsed text in permutation {text!r}: {covered!r}")
    mapping = {}
    for cyc in _CYCLE_RE.findall(body):
        pts = [p for p in re.split(r"[,\s]+", cyc.strip()) if p]
        try:
            pts = [int(p) for p in pts]
        except ValueError as exc:
            raise GroupSpecError(f"bad cycle {cyc!r}") from exc
        if any(p < 1 for p in pts):
            raise GroupSpecError("permutation points must be >= 1")
        if len(set(pts)) != len(pts):
            raise GroupSpecError(f"repeated point in cycle {cyc!r}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a in mapping:
                raise GroupSpecError(f"point {a} appears in two cycles")
            mapping[a] = b
    return mapping


def permutation_group(cycle_specs, max_order=None) -> FiniteGroup:
    """Closure of the given permutations (disjoint-cycle strings)."""
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    mappings = [_parse_permutation(s) for s in cycle_specs]
    degree = max((max(m) for m in mappings if m), default=1)
    gens = []
    for m in mappings:
        perm = tuple(m.get(p, p) - 1 for p in range(1, degree + 1))
        gens.append(perm)
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(degree))
                if q not in index:
                    if len(elements) >= cap:
                        raise OrderCapExceeded(
                            f"permutation closure exceeds max order {cap}")
                    index[q] = len(elements)
                    elements.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(elements)
    table = np.zeros((n, n), dtype=np.int32)
    for i, p in enumerate(elements):
        for j, q in enumerate(elements):
            table[i, j] = index[tuple(p[q[k]] for k in range(degree))]
    labels = [_cycle_label(p) for p in elements]
    return FiniteGroup(table, labels, name="perm:" + ";".join(cycle_specs))


def _cycle_label(perm):
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(out) or "()"


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int32), ["e"], name="cyclic:1")


def direct_product(g: FiniteGroup, h: FiniteGroup, max_order=None):
    """G x H with componentwise multiplication.

    Returns (product, inject_g, inject_h); product index of (a, b) is
    a * |H| + b.
    """
    order = g.order * h.order
    _check_cap(order, max_order)
    oh = h.order
    table = (g.table[:, None, :, None].astype(np.int64) * oh
             + h.table[None, :, None, :]).reshape(order, order).astype(np.int32)
    labels = [f"({la},{lb})" for la in g.labels for lb in h.labels]
    name = f"{g.name} x {h.name}"
    p = FiniteGroup(table, labels, name=name)
    inj_g = GroupHom(g, p, np.arange(g.order, dtype=np.int64) * oh, validate=False)
    inj_h = GroupHom(h, p, np.arange(h.order, dtype=np.int64), validate=False)
    return p, inj_g, inj_h


def product_index(g: FiniteGroup, h: FiniteGroup, a: int, b: int) -> int:
    return a * h.order + b


def _check_cap(order, max_order):
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if order > cap:
        raise OrderCapExceeded(f"group order {order} exceeds max order {cap}")


# ---------------------------------------------------------------------------
# the group-spec grammar


def construct_group(spec: str, max_order=None) -> FiniteGroup:
    """Build a group from a spec string (see module docstring for grammar)."""
    parts = [p.strip() for p in spec.split(" x ")]
    if any(not p for p in parts):
        raise GroupSpecError(f"empty factor in spec {spec!r}")
    groups = [_construct_atom(p, max_order) for p in parts]
    g = groups[0]
    for h in groups[1:]:
        g, _, _ = direct_product(g, h, max_order)
    return g


def _construct_atom(spec: str, max_order) -> FiniteGroup:
    if ":" not in spec:
        raise GroupSpecError(f"malformed group spec {spec!r} (expected kind:args)")
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    arg = arg.strip()
    if kind == "cyclic":
        n = _parse_positive(arg, spec)
        return cyclic_group(n, max_order)
    if kind == "abelian":
        if not (arg.startswith("[") and arg.endswith("]")):
            raise GroupSpecError(f"abelian spec needs [n1,n2,...]: {spec!r}")
        try:
            factors = [int(x) for x in arg[1:-1].split(",") if x.strip()]
        except ValueError as exc:
            raise GroupSpecError(f"bad abelian factors in {spec!r}") from exc
        if not factors:
            raise GroupSpecError(f"abelian spec needs at least one factor: {spec!r}")
        return abelian_group(factors, max_order)
    if kind == "dihedral":
        return dihedral_group(_parse_positive(arg, spec), max_order)
    if kind == "quaternion":
        if arg != "8":
            raise GroupSpecError("only quaternion:8 is supported")
        return quaternion_group(max_order)
    if kind == "perm":
        gens = [s for s in arg.split(";") if s.strip()]
        if not gens:
            raise GroupSpecError(f"perm spec needs generators: {spec!r}")
        return permutation_group(gens, max_order)
    raise GroupSpecError(f"unknown group kind {kind!r} in {spec!r}")


def _parse_positive(text, spec):
    try:
        n = int(text)
    except ValueError as exc:
        raise GroupSpecError(f"bad integer in {spec!r}") from exc
    if n < 1:
        raise GroupSpecError(f"parameter must be positive in {spec!r}")
    return n


# ---------------------------------------------------------------------------
# subgroup machinery


def center(g: FiniteGroup) -> Subgroup:
    if "center" not in g._cache:
        mask = (g.table == g.table.T).all(axis=1)
        g._cache["center"] = Subgroup(g, tuple(np.nonzero(mask)[0]))
    return g._cache["center"]


def subgroup_closure(g: FiniteGroup, gens) -> Subgroup:
    gens = [int(x) for x in gens]
    if any(x < 0 or x >= g.order for x in gens):
        raise ValueError("generator index out of range")
    gens = sorted(set(gens) | {0})
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = int(g.table[a, b])
                if c not in members:
                    members.add(c)
                    nxt.append(c)
        frontier = nxt
    return Subgroup(g, tuple(sorted(members)))


def commutator_subgroup(g: FiniteGroup, a: Subgroup, b: Subgroup) -> Subgroup:
    am = np.array(a.members, dtype=np.int32)
    bm = np.array(b.members, dtype=np.int32)
    ia = g.inverse[am]
    ib = g.inverse[bm]
    left = g.table[np.ix_(ia, ib)]        # a^-1 b^-1
    right = g.table[np.ix_(am, bm)]       # a b
    comms = g.table[left, right]
    return subgroup_closure(g, set(int(x) for x in comms.ravel()))


def derived_subgroup(g: FiniteGroup) -> Subgroup:
    if "derived" not in g._cache:
        whole = whole_subgroup(g)
        g._cache["derived"] = commutator_subgroup(g, whole, whole)
    return g._cache["derived"]


def is_perfect(g: FiniteGroup) -> bool:
    return derived_subgroup(g).order == g.order


def lower_central_series(g: FiniteGroup):
    """gamma_1 = G, gamma_{i+1} = [gamma_i, G], until stabilization."""
    series = [whole_subgroup(g)]
    whole = series[0]
    while True:
        nxt = commutator_subgroup(g, series[-1], whole)
        if nxt.members == series[-1].members:
            break
        series.append(nxt)
    return series


def nilpotency_class(g: FiniteGroup):
    """Least c with gamma_{c+1} trivial, or None if not nilpotent."""
    series = lower_central_series(g)
    if series[-1].is_trivial:
        return len(series) - 1
    return None


def upper_central_series(g: FiniteGroup):
    """Z_0 = 1, Z_{i+1}/Z_i = Z(G/Z_i), until stabilization."""
    series = [trivial_subgroup(g)]
    while True:
        zi = series[-1]
        if zi.is_whole:
            break
        q, proj = quotient(g, zi)
        zq = center(q).member_set()
        members = tuple(i for i in range(g.order) if int(proj.images[i]) in zq)
        nxt = Subgroup(g, members)
        if nxt.members == zi.members:
            break
        series.append(nxt)
    return series


def quotient(g: FiniteGroup, n: Subgroup):
    """G/N (N normal, checked) together with the projection homomorphism."""
    if n.parent is not g:
        raise ValueError("subgroup belongs to a different group")
    if not n.is_normal():
        raise NotNormalError("subgroup is not normal")
    mem = np.array(n.members, dtype=np.int32)
    cosets = g.table[:, mem]
    rep = cosets.min(axis=1)
    reps = sorted(set(int(r) for r in rep))
    index_of = {r: i for i, r in enumerate(reps)}
    coset_id = np.array([index_of[int(r)] for r in rep], dtype=np.int32)
    reps_arr = np.array(reps, dtype=np.int32)
    qtable = coset_id[g.table[np.ix_(reps_arr, reps_arr)]]
    labels = [g.labels[r] for r in reps]
    q = FiniteGroup(qtable, labels, name=f"({g.name})/N{n.order}")
    proj = GroupHom(g, q, coset_id, validate=False)
    return q, proj


def subgroup_as_group(s: Subgroup):
    """Materialize a subgroup as its own FiniteGroup plus the inclusion map."""
    g = s.parent
    mem = list(s.members)
    index_of = {m: i for i, m in enumerate(mem)}
    table = np.array([[index_of[int(g.table[a, b])] for b in mem] for a in mem],
                     dtype=np.int32)
    labels = [g.labels[m] for m in mem]
    sub = FiniteGroup(table, labels, name=f"subgroup<{len(mem)}> of {g.name}")
    inclusion = [int(m) for m in mem]
    return sub, inclusion


# ---------------------------------------------------------------------------
# abelian structure and abelianization


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant-factor decomposition of a finite abelian group.

    ``factors`` are in descending-divisibility order (n_{i+1} | n_i) and
    ``coords[i]`` gives the residue tuple of element i over ``basis``.
    """

    group: FiniteGroup
    factors: tuple
    basis: tuple
    coords: np.ndarray

    def coordinates(self, i: int):
        return tuple(int(x) for x in self.coords[i])

    def element_of(self, coords) -> int:
        g = self.group
        acc = 0
        for b, c, n in zip(self.basis, coords, self.factors):
            acc = int(g.table[acc, g.power(b, int(c) % n)])
        return acc


def abelian_structure(g: FiniteGroup) -> AbelianStructure:
    """Basis and coordinates for a finite abelian Cayley-table group."""
    if not g.is_abelian:
        raise ValueError("group is not abelian")
    key = "abelian_structure"
    if key in g._cache:
        return g._cache[key]
    factors, basis = _abelian_basis(g)
    k = len(factors)
    coords = np.zeros((g.order, k), dtype=np.int64)
    elem_to_coords = {}
    for tup in iproduct(*(range(n) for n in factors)):
        acc = 0
        for b, c in zip(basis, tup):
            acc = int(g.table[acc, g.power(b, c)])
        if acc in elem_to_coords:
            raise AssertionError("abelian basis is not independent")
        elem_to_coords[acc] = tup
    if len(elem_to_coords) != g.order:
        raise AssertionError("abelian basis does not span")
    for e, tup in elem_to_coords.items():
        coords[e] = tup
    st = AbelianStructure(g, tuple(factors), tuple(basis), coords)
    g._cache[key] = st
    return st


def _abelian_basis(g: FiniteGroup):
    if g.order == 1:
        return [], []
    orders = g.element_orders()
    gen = max(range(g.order), key=lambda i: orders[i])
    n1 = orders[gen]
    cyc = subgroup_closure(g, [gen])
    h, proj = quotient(g, cyc)
    sub_factors, sub_basis = _abelian_basis(h)
    powers_of_gen = {}
    x = 0
    for c in range(n1):
        powers_of_gen[x] = c
        x = int(g.table[x, gen])
    basis = [gen]
    for hbar, m in zip(sub_basis, sub_factors):
        lift = int(np.nonzero(proj.images == hbar)[0][0])
        c = powers_of_gen[g.power(lift, m)]
        if c % m:
            raise AssertionError("abelian basis lift failed")
        adj = g.power(gen, (n1 - c // m) % n1)
        basis.append(int(g.table[lift, adj]))
    return [n1] + sub_factors, basis


class AbelianizationMap:
    """Projection of G onto its abelianization, with coordinates."""

    __slots__ = ("group", "projection", "structure", "fp")

    def __init__(self, group, projection, structure, fp):
        self.group = group
        self.projection = projection
        self.structure = structure
        self.fp = fp

    def coordinates(self, i: int):
        """Ambient coordinates of the class of element i."""
        return self.structure.coordinates(int(self.projection.images[i]))


def abelianization(g: FiniteGroup):
    """G/G' with an invariant-factor presentation and projection data."""
    from .zlinalg import FPAbelianGroup

    key = "abelianization"
    if key in g._cache:
        data = g._cache[key]
        return data.fp, data
    q, proj = quotient(g, derived_subgroup(g))
    st = abelian_structure(q)
    fp = FPAbelianGroup.from_invariant_factors(st.factors)
    data = AbelianizationMap(g, proj, st, fp)
    g._cache[key] = data
    return fp, data
