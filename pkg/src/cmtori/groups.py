"""Finite groups as dense Cayley tables, hard-capped at order 512.

Elements are the indices 0..order-1.  Groups are immutable; every
constructor validates the Latin-square and associativity axioms
exhaustively.  Subgroups are sorted element tuples, and conjugacy-class
representatives are chosen as the lexicographically least element list, so
every enumeration here is deterministic across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .abelian import AbElement, AbHom, FinAb, smith_normal_form
from .errors import ConstructionError

MAX_ORDER = 512


def _analyze_table(table):
    """Validate a Cayley table; return (identity, inverses)."""
    n = len(table)
    if n == 0:
        raise ConstructionError("empty table")
    if n > MAX_ORDER:
        raise ConstructionError("group order exceeds the hard cap", order=n, cap=MAX_ORDER)
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (n, n):
        raise ConstructionError("table is not square", shape=list(t.shape))
    if t.min() < 0 or t.max() >= n:
        raise ConstructionError("table entry out of range")
    ref = np.arange(n)
    for i in range(n):
        if not (np.array_equal(np.sort(t[i]), ref) and np.array_equal(np.sort(t[:, i]), ref)):
            raise ConstructionError("table is not a Latin square", line=i)
    identity = None
    for e in range(n):
        if np.array_equal(t[e], ref) and np.array_equal(t[:, e], ref):
            identity = e
            break
    if identity is None:
        raise ConstructionError("no two-sided identity")
    # associativity: (a*b)*c == a*(b*c), checked in chunks of rows
    for a in range(n):
        left = t[t[a]]          # left[b, c] = t[t[a, b], c]
        right = t[a][t]         # right[b, c] = t[a, t[b, c]]
        if not np.array_equal(left, right):
            b, c = np.argwhere(left != right)[0]
            raise ConstructionError(
                "associativity fails", triple=[int(a), int(b), int(c)])
    inverses = [0] * n
    for g in range(n):
        inverses[g] = int(np.nonzero(t[g] == identity)[0][0])
    return identity, tuple(inverses)


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverses: tuple[int, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return self.table[self.table[g][x]][self.inverses[g]]

    def commutator(self, g: int, h: int) -> int:
        t = self.table
        return t[t[g][h]][t[self.inverses[g]][self.inverses[h]]]

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, g: int) -> int:
        n = 1
        x = g
        while x != self.identity:
            x = self.table[x][g]
            n += 1
        return n

    def power(self, g: int, k: int) -> int:
        k %= self.element_order(g)
        x = self.identity
        for _ in range(k):
            x = self.table[x][g]
        return x

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def exponent(self) -> int:
        return math.lcm(*(self.element_order(g) for g in self.elements()))

    def __repr__(self):
        label = self.name or "group"
        return f"FiniteGroup({label}, order={self.order})"

    def __hash__(self):
        return hash((self.table, self.identity))


def from_table(table, name: str = "") -> FiniteGroup:
    table = tuple(tuple(int(x) for x in row) for row in table)
    identity, inverses = _analyze_table(table)
    return FiniteGroup(table, identity, inverses, name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ConstructionError("cyclic group needs order >= 1", n=n)
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return from_table(table, f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: indices 0..n-1 rotations, n..2n-1 reflections."""
    if n < 1:
        raise ConstructionError("dihedral group needs n >= 1", n=n)

    def mul(a, b):
        ra, fa = a % n, a >= n
        rb, fb = b % n, b >= n
        if not fa and not fb:
            return (ra + rb) % n
        if not fa and fb:
            return n + (rb - ra) % n
        if fa and not fb:
            return n + (ra + rb) % n
        return (rb - ra) % n

    table = tuple(tuple(mul(a, b) for b in range(2 * n)) for a in range(2 * n))
    return from_table(table, f"D{n}")


def quaternion8() -> FiniteGroup:
    """Quaternion group on [1, -1, i, -i, j, -j, k, -k]."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    sign = {s + n: (s == "-", n) for s in ("", "-") for n in ("1", "i", "j", "k")}
    base = {
        ("1", "1"): (False, "1"), ("1", "i"): (False, "i"),
        ("1", "j"): (False, "j"), ("1", "k"): (False, "k"),
        ("i", "1"): (False, "i"), ("j", "1"): (False, "j"), ("k", "1"): (False, "k"),
        ("i", "i"): (True, "1"), ("j", "j"): (True, "1"), ("k", "k"): (True, "1"),
        ("i", "j"): (False, "k"), ("j", "i"): (True, "k"),
        ("j", "k"): (False, "i"), ("k", "j"): (True, "i"),
        ("k", "i"): (False, "j"), ("i", "k"): (True, "j"),
    }

    def mul(a, b):
        sa, na = sign[names[a]]
        sb, nb = sign[names[b]]
        sp, np_ = base[(na, nb)]
        s = sa ^ sb ^ sp
        return names.index(("-" if s else "") + np_)

    table = tuple(tuple(mul(a, b) for b in range(8)) for a in range(8))
    return from_table(table, "Q8")


def units_mod(n: int) -> FiniteGroup:
    """Multiplicative group of residues prime to n, indexed in increasing residue order."""
    if n < 1:
        raise ConstructionError("modulus must be positive", n=n)
    residues = [a for a in range(1, n + 1) if math.gcd(a, n) == 1]
    if n == 1:
        residues = [1]
    index = {a: i for i, a in enumerate(residues)}
    table = tuple(tuple(index[(a * b) % n if n > 1 else 1] for b in residues) for a in residues)
    g = from_table(table, f"units_mod_{n}")
    object.__setattr__(g, "_residues", tuple(residues))
    return g


def residues_of(units_group: FiniteGroup):
    return getattr(units_group, "_residues", None)


@dataclass(frozen=True)
class ProductGroup:
    """Direct product with row-major (lexicographic factor) element packing."""

    group: FiniteGroup
    factor_orders: tuple[int, ...]

    def pack(self, parts) -> int:
        g = 0
        for p, n in zip(parts, self.factor_orders, strict=True):
            g = g * n + p
        return g

    def unpack(self, g: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.factor_orders):
            g, r = divmod(g, n)
            out.append(r)
        return tuple(reversed(out))

    def embed(self, i: int, gi: int, identities) -> int:
        parts = list(identities)
        parts[i] = gi
        return self.pack(parts)


def direct_product(*factors: FiniteGroup, name: str = "") -> ProductGroup:
    orders = tuple(g.order for g in factors)
    total = math.prod(orders)
    if total > MAX_ORDER:
        raise ConstructionError("product order exceeds the hard cap", order=total)

    strides = []
    s = 1
    for n in reversed(orders):
        strides.append(s)
        s *= n
    strides = tuple(reversed(strides))

    def unpack(g):
        return tuple((g // st) % n for st, n in zip(strides, orders))

    def pack(parts):
        return sum(p * st for p, st in zip(parts, strides))

    table = []
    for a in range(total):
        pa = unpack(a)
        row = []
        for b in range(total):
            pb = unpack(b)
            row.append(pack(tuple(f.mul(x, y) for f, x, y in zip(factors, pa, pb))))
        table.append(tuple(row))
    label = name or "x".join(f.name or "?" for f in factors)
    return ProductGroup(from_table(tuple(table), label), orders)


def _perm_from_cycles(cycles, degree):
    img = list(range(degree))
    for cyc in cycles:
        if len(cyc) < 2:
            continue
        for i, x in enumerate(cyc):
            img[x] = cyc[(i + 1) % len(cyc)]
    return tuple(img)


def from_permutation_generators(generators, degree: int, name: str = "") -> FiniteGroup:
    """Close permutation generators (image arrays or lists of cycles) to a group."""
    perms = []
    for gen in generators:
        if gen and isinstance(gen[0], (list, tuple)):
            perms.append(_perm_from_cycles(gen, degree))
        else:
            img = tuple(int(x) for x in gen)
            if sorted(img) != list(range(degree)):
                raise ConstructionError("generator is not a permutation", generator=list(gen))
            perms.append(img)
    ident = tuple(range(degree))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in perms:
                r = tuple(p[q[i]] for i in range(degree))
                if r not in elems:
                    if len(elems) >= MAX_ORDER:
                        raise ConstructionError("closure exceeds the hard cap", cap=MAX_ORDER)
                    elems.add(r)
                    nxt.append(r)
        frontier = nxt
    ordered = sorted(elems)
    index = {p: i for i, p in enumerate(ordered)}
    table = tuple(
        tuple(index[tuple(p[q[i]] for i in range(degree))] for q in ordered)
        for p in ordered)
    return from_table(table, name or f"perm_deg{degree}")


def construct_group(spec) -> FiniteGroup:
    """Build a group from a family spec dict or an explicit table."""
    if isinstance(spec, FiniteGroup):
        return spec
    if not isinstance(spec, dict):
        raise ConstructionError("group spec must be a mapping")
    if "table" in spec:
        table = spec["table"]
        if "order" in spec and int(spec["order"]) != len(table):
            raise ConstructionError("declared order disagrees with the table")
        return from_table(table, spec.get("name", ""))
    if "permutation_generators" in spec:
        return from_permutation_generators(
            spec["permutation_generators"], int(spec["degree"]), spec.get("name", ""))
    family = spec.get("family")
    if family == "cyclic":
        return cyclic(int(spec["n"]))
    if family == "dihedral":
        return dihedral(int(spec["n"]))
    if family == "quaternion8":
        return quaternion8()
    if family == "units_mod":
        return units_mod(int(spec["n"]))
    if family == "product":
        return direct_product(*(construct_group(f) for f in spec["factors"])).group
    raise ConstructionError("unrecognized group spec", keys=sorted(spec))


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        g = self.group
        mem = set(elems)
        if g.identity not in mem:
            raise ConstructionError("subgroup misses the identity")
        for a in elems:
            if g.inverses[a] not in mem:
                raise ConstructionError("subgroup not closed under inverse", element=a)
            for b in elems:
                if g.table[a][b] not in mem:
                    raise ConstructionError("subgroup not closed", pair=[a, b])

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.group.order // self.order

    def __contains__(self, g: int) -> bool:
        return g in set(self.elements)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return set(other.elements) <= set(self.elements)

    def is_cyclic(self) -> bool:
        return any(self.group.element_order(g) == self.order for g in self.elements)

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """Standalone Cayley table; second value maps local index -> parent element."""
        return _subgroup_as_group(self.group, self.elements)

    def __hash__(self):
        return hash((self.group, self.elements))


@lru_cache(maxsize=4096)
def _subgroup_as_group(group: FiniteGroup, elements: tuple[int, ...]):
    index = {g: i for i, g in enumerate(elements)}
    table = tuple(tuple(index[group.table[a][b]] for b in elements) for a in elements)
    sub = from_table(table)
    return sub, elements


def closure(group: FiniteGroup, gens) -> tuple[int, ...]:
    elems = {group.identity}
    frontier = list(set(gens))
    elems.update(frontier)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(elems):
                for c in (group.table[a][b], group.table[b][a]):
                    if c not in elems:
                        elems.add(c)
                        nxt.append(c)
        frontier = nxt
    return tuple(sorted(elems))


def subgroup_generated(group: FiniteGroup, gens) -> Subgroup:
    return Subgroup(group, closure(group, gens))


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, (group.identity,))


def full_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, tuple(group.elements()))


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    return Subgroup(a.group, tuple(sorted(set(a.elements) & set(b.elements))))


def is_normal(group: FiniteGroup, s: Subgroup) -> bool:
    mem = set(s.elements)
    return all(group.conj(g, x) in mem for g in group.elements() for x in s.elements)


def cosets(group: FiniteGroup, s: Subgroup, side: str = "left"):
    """Partition into cosets, each a sorted tuple; cosets sorted by least element."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    seen = set()
    out = []
    for g in group.elements():
        if g in seen:
            continue
        if side == "left":
            cs = tuple(sorted(group.table[g][h] for h in s.elements))
        else:
            cs = tuple(sorted(group.table[h][g] for h in s.elements))
        seen.update(cs)
        out.append(cs)
    return sorted(out)


def conjugacy_classes(group: FiniteGroup):
    seen = set()
    classes = []
    for g in group.elements():
        if g in seen:
            continue
        orbit = tuple(sorted({group.conj(x, g) for x in group.elements()}))
        seen.update(orbit)
        classes.append(orbit)
    return sorted(classes)


def center(group: FiniteGroup) -> Subgroup:
    t = group.table
    elems = [g for g in group.elements()
             if all(t[g][h] == t[h][g] for h in group.elements())]
    return Subgroup(group, tuple(elems))


def conjugate_subgroup(group: FiniteGroup, s: Subgroup, g: int) -> Subgroup:
    return Subgroup(group, tuple(sorted(group.conj(g, x) for x in s.elements)))


def canonical_conjugate(group: FiniteGroup, s: Subgroup) -> Subgroup:
    best = min(tuple(sorted(group.conj(g, x) for x in s.elements))
               for g in group.elements())
    return Subgroup(group, best)


def dedupe_up_to_conjugacy(group: FiniteGroup, subgroups):
    reps = {canonical_conjugate(group, s).elements for s in subgroups}
    return [Subgroup(group, e) for e in sorted(reps, key=lambda e: (len(e), e))]


def are_conjugate(group: FiniteGroup, a: Subgroup, b: Subgroup) -> bool:
    return canonical_conjugate(group, a).elements == canonical_conjugate(group, b).elements


def cyclic_subgroups_up_to_conjugacy(group: FiniteGroup):
    """One representative per conjugacy class of cyclic subgroups, trivial included."""
    subs = {closure(group, [g]) for g in group.elements()}
    return dedupe_up_to_conjugacy(group, [Subgroup(group, e) for e in subs])


def normalizer(group: FiniteGroup, s: Subgroup) -> Subgroup:
    mem = set(s.elements)
    elems = [g for g in group.elements()
             if {group.conj(g, x) for x in s.elements} == mem]
    return Subgroup(group, tuple(elems))


def sylow(group: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown through normalizer quotients."""
    n = group.order
    if p < 2 or n % p != 0:
        raise ConstructionError("p does not divide the group order", p=p, order=n)
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    current = trivial_subgroup(group)
    while current.order < target:
        norm = normalizer(group, current)
        local, embed = norm.as_group()
        local_cur = Subgroup(local, tuple(sorted(embed.index(x) for x in current.elements)))
        quot = quotient_group(local, local_cur)
        lift = None
        for q in quot.group.elements():
            o = quot.group.element_order(q)
            if o % p == 0:
                qq = quot.group.power(q, o // p)
                lift = quot.representatives[qq]
                break
        if lift is None:
            raise ConstructionError("sylow growth stalled; table is inconsistent")
        current = subgroup_generated(group, current.elements + (embed[lift],))
    return current


@dataclass(frozen=True)
class QuotientGroup:
    group: FiniteGroup
    projection: tuple[int, ...]       # parent element -> quotient element
    representatives: tuple[int, ...]  # quotient element -> least parent representative


def quotient_group(group: FiniteGroup, n: Subgroup) -> QuotientGroup:
    if not is_normal(group, n):
        raise ConstructionError("quotient by a non-normal subgroup")
    parts = cosets(group, n, "left")
    proj = [0] * group.order
    for i, cs in enumerate(parts):
        for g in cs:
            proj[g] = i
    reps = tuple(cs[0] for cs in parts)
    table = tuple(tuple(proj[group.table[reps[a]][reps[b]]] for b in range(len(parts)))
                  for a in range(len(parts)))
    return QuotientGroup(from_table(table), tuple(proj), reps)


# ---------------------------------------------------------------------------
# homomorphisms and abelianization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.order:
            raise ConstructionError("image list has wrong length")
        td, tc = self.domain.table, self.codomain.table
        im = self.images
        for a in self.domain.elements():
            for b in self.domain.elements():
                if im[td[a][b]] != tc[im[a]][im[b]]:
                    raise ConstructionError("not a homomorphism", pair=[a, b])

    def __call__(self, g: int) -> int:
        return self.images[g]


@dataclass(frozen=True)
class Abelianization:
    """G/[G,G] in invariant-factor form with the projection and a section."""

    source: FiniteGroup
    group: FinAb
    images: tuple[tuple[int, ...], ...]  # element -> coordinates
    sections: tuple[int, ...]            # canonical generator -> a preimage in G

    def project(self, g: int) -> AbElement:
        return self.group.element(self.images[g])


def commutator_subgroup(group: FiniteGroup) -> Subgroup:
    gens = {group.commutator(a, b) for a in group.elements() for b in group.elements()}
    return subgroup_generated(group, gens)


def _abelian_coordinates(group: FiniteGroup):
    """Invariant factors and coordinates for an abelian Cayley-table group."""
    order = group.order
    gens = []
    have = {group.identity}
    while len(have) < order:
        pick = None
        for g in group.elements():
            if g in have:
                continue
            o = group.element_order(g)
            if pick is None or o > pick[0]:
                pick = (o, g)
        gens.append(pick[1])
        have = set(closure(group, gens))
    s = len(gens)
    if s == 0:
        return FinAb(()), tuple(() for _ in range(order))
    # breadth-first exponent vectors; back edges give relation vectors
    vecs = {group.identity: (0,) * s}
    frontier = [group.identity]
    relations = []
    while frontier:
        nxt = []
        for x in frontier:
            vx = vecs[x]
            for i, g in enumerate(gens):
                y = group.table[x][g]
                vy = tuple(v + (1 if j == i else 0) for j, v in enumerate(vx))
                if y in vecs:
                    rel = tuple(a - b for a, b in zip(vy, vecs[y]))
                    if any(rel):
                        relations.append(rel)
                else:
                    vecs[y] = vy
                    nxt.append(y)
        frontier = nxt
    rel_matrix = tuple(tuple(rel[i] for rel in relations) for i in range(s))
    form = smith_normal_form(rel_matrix)
    diag = form.diagonal
    if len(diag) != s or any(x == 0 for x in diag) or math.prod(diag) != order:
        raise ConstructionError("abelian structure extraction failed", diagonal=list(diag))
    keep = [i for i in range(s) if diag[i] > 1]
    fin = FinAb(tuple(diag[i] for i in keep))
    coords = []
    for g in range(order):
        w = vecs[g]
        full = tuple(sum(form.u[i][j] * w[j] for j in range(s)) for i in range(s))
        coords.append(tuple(full[i] % diag[i] for i in keep))
    return fin, tuple(coords)


def abelianization(group: FiniteGroup) -> Abelianization:
    derived = commutator_subgroup(group)
    quot = quotient_group(group, derived)
    fin, qcoords = _abelian_coordinates(quot.group)
    images = tuple(qcoords[quot.projection[g]] for g in group.elements())
    sections = []
    for j in range(fin.rank):
        unit = tuple(1 if i == j else 0 for i in range(fin.rank))
        sections.append(images.index(unit))
    return Abelianization(group, fin, images, tuple(sections))


def induced_abelian_hom(sub: Subgroup, sub_ab: Abelianization,
                        parent_ab: Abelianization) -> AbHom:
    """The natural map H^ab -> G^ab for a subgroup H of G.

    ``sub_ab`` must be the abelianization of ``sub.as_group()``.
    """
    _, embed = sub.as_group()
    cols = []
    for local in sub_ab.sections:
        cols.append(parent_ab.images[embed[local]])
    rank = parent_ab.group.rank
    matrix = tuple(tuple(col[i] for col in cols) for i in range(rank))
    return AbHom(sub_ab.group, parent_ab.group, matrix)
