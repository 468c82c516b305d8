"""Transfer (Verlagerung) homomorphisms computed from coset sections.

The transfer of G into H^ab is Ver(g) = prod_x h_{g,x} over the cosets
x in G/H, where g.phi(x) = phi(gx).h_{g,x} for a section phi.  The result
is independent of the section; the canonical section used here picks the
least element index in each coset.  All maps are returned as AbHom
matrices over the canonical invariant-factor generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abelian import AbElement, AbHom, FinAb, cokernel_of_hom, image_of_hom, subgroup_of
from .errors import ConstructionError, InternalCheckError
from .groups import (
    Abelianization,
    FiniteGroup,
    Subgroup,
    abelianization,
    cosets,
    is_normal,
    quotient_group,
    sylow,
)


@lru_cache(maxsize=2048)
def group_abelianization(group: FiniteGroup) -> Abelianization:
    return abelianization(group)


@lru_cache(maxsize=4096)
def subgroup_abelianization(sub: Subgroup):
    """(Abelianization of the subgroup's own table, local->parent element map)."""
    local, embed = sub.as_group()
    return abelianization(local), embed


def _coset_assignment(group: FiniteGroup, sub: Subgroup, side: str):
    """coset id per element, following the sorted coset order."""
    parts = cosets(group, sub, side)
    coset_of = [0] * group.order
    for i, cs in enumerate(parts):
        for g in cs:
            coset_of[g] = i
    return parts, coset_of


def canonical_section(group: FiniteGroup, sub: Subgroup, side: str = "left"):
    parts, coset_of = _coset_assignment(group, sub, side)
    return tuple(cs[0] for cs in parts), coset_of


def _transfer_element(group, g, reps, coset_of, into_sub):
    """Sum of the correction terms of g over left cosets, pushed through into_sub."""
    t = group.table
    inv = group.inverses
    total = None
    for rep in reps:
        moved = t[g][rep]
        rep2 = reps[coset_of[moved]]
        h = t[inv[rep2]][moved]
        val = into_sub(h)
        total = val if total is None else total + val
    return total


def transfer_with_section(group: FiniteGroup, sub: Subgroup, reps) -> AbHom:
    """Transfer computed from an explicit section (one representative per coset).

    Exposed for the section-independence property; ``transfer`` fixes the
    canonical least-element section.
    """
    parts, coset_of = _coset_assignment(group, sub, "left")
    reps = tuple(reps)
    if len(reps) != len(parts):
        raise ConstructionError("section has wrong size")
    for rep, cs in zip(reps, parts):
        if rep not in cs:
            raise ConstructionError("section representative outside its coset", rep=rep)
    sub_ab, _ = subgroup_abelianization(sub)
    _, embed = sub.as_group()
    local_index = {p: i for i, p in enumerate(embed)}
    g_ab = group_abelianization(group)

    def into_sub(h):
        return sub_ab.project(local_index[h])

    cols = []
    for g in g_ab.sections:
        cols.append(_transfer_element(group, g, reps, coset_of, into_sub).coords)
    matrix = tuple(tuple(col[i] for col in cols) for i in range(sub_ab.group.rank))
    return AbHom(g_ab.group, sub_ab.group, matrix)


@lru_cache(maxsize=4096)
def transfer(group: FiniteGroup, sub: Subgroup) -> AbHom:
    """The transfer G^ab -> H^ab with the canonical least-element section."""
    reps, _ = canonical_section(group, sub)
    return transfer_with_section(group, sub, reps)


def right_transfer(group: FiniteGroup, sub: Subgroup) -> AbHom:
    """Right-coset variant; agrees with ``transfer`` on every input."""
    parts, coset_of = _coset_assignment(group, sub, "right")
    reps = tuple(cs[0] for cs in parts)
    sub_ab, _ = subgroup_abelianization(sub)
    _, embed = sub.as_group()
    local_index = {p: i for i, p in enumerate(embed)}
    g_ab = group_abelianization(group)
    t = group.table
    inv = group.inverses
    cols = []
    for g in g_ab.sections:
        total = None
        for rep in reps:
            moved = t[rep][g]
            rep2 = reps[coset_of[moved]]
            h = t[moved][inv[rep2]]
            val = sub_ab.project(local_index[h])
            total = val if total is None else total + val
        cols.append(total.coords)
    matrix = tuple(tuple(col[i] for col in cols) for i in range(sub_ab.group.rank))
    return AbHom(g_ab.group, sub_ab.group, matrix)


def conjugation_norm(group: FiniteGroup, sub: Subgroup) -> AbHom:
    """The norm of the conjugation action on H^ab, for H normal in G."""
    if not is_normal(group, sub):
        raise ConstructionError("conjugation norm needs a normal subgroup")
    sub_ab, embed = subgroup_abelianization(sub)
    local_index = {p: i for i, p in enumerate(embed)}
    reps, _ = canonical_section(group, sub)
    cols = []
    for j in range(sub_ab.group.rank):
        h = embed[sub_ab.sections[j]]
        total = None
        for x in reps:
            val = sub_ab.project(local_index[group.conj(x, h)])
            total = val if total is None else total + val
        cols.append(total.coords)
    matrix = tuple(tuple(col[i] for col in cols) for i in range(sub_ab.group.rank))
    return AbHom(sub_ab.group, sub_ab.group, matrix)


# ---------------------------------------------------------------------------
# relative transfer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelativeTarget:
    """The maximal abelian quotient of ``outer`` killing ``inner``."""

    outer: Subgroup
    inner: Subgroup
    group: FinAb
    _proj: AbHom            # outer^ab -> group
    _local_index: dict

    def project(self, parent_element: int) -> AbElement:
        outer_ab, _ = subgroup_abelianization(self.outer)
        local = self._local_index[parent_element]
        return self._proj(outer_ab.project(local))


@lru_cache(maxsize=4096)
def relative_target(outer: Subgroup, inner: Subgroup) -> RelativeTarget:
    if not outer.contains_subgroup(inner):
        raise ConstructionError("inner subgroup not contained in outer")
    outer_ab, embed = subgroup_abelianization(outer)
    local_index = {p: i for i, p in enumerate(embed)}
    gens = [outer_ab.project(local_index[h]) for h in inner.elements]
    image = subgroup_of(outer_ab.group, gens)
    quot, proj = cokernel_of_hom(image.inclusion)
    return RelativeTarget(outer, inner, quot, proj, local_index)


@lru_cache(maxsize=4096)
def relative_transfer(group: FiniteGroup, outer: Subgroup, inner: Subgroup) -> AbHom:
    """Transfer of G into (outer/inner)^ab relative to ``inner``.

    Equals the mod-inner projection composed with the transfer into outer^ab.
    """
    target = relative_target(outer, inner)
    g_ab = group_abelianization(group)
    reps, coset_of = canonical_section(group, outer)
    cols = []
    for g in g_ab.sections:
        total = _transfer_element(group, g, reps, coset_of, target.project)
        cols.append(total.coords)
    matrix = tuple(tuple(col[i] for col in cols) for i in range(target.group.rank))
    return AbHom(g_ab.group, target.group, matrix)


@lru_cache(maxsize=1024)
def cyclic_relative_quotient(outer: Subgroup, inner: Subgroup):
    """(quotient group N = outer/inner, local->parent map); requires inner normal."""
    local, embed = outer.as_group()
    local_index = {p: i for i, p in enumerate(embed)}
    inner_local = Subgroup(local, tuple(sorted(local_index[h] for h in inner.elements)))
    if not is_normal(local, inner_local):
        raise ConstructionError("inner subgroup is not normal in outer")
    quot = quotient_group(local, inner_local)
    return quot, embed, local_index


def transfer_cyclic_double_coset(group: FiniteGroup, outer: Subgroup,
                                 inner: Subgroup, g: int):
    """Evaluate the relative transfer of g through double cosets <g>\\G/outer.

    Returns (element index in N, quotient N = outer/inner) with N cyclic.
    For each double-coset representative x the coset orbit size f satisfies
    g^f x in x.outer, and the class of x^-1 g^f x in N contributes its
    discrete log with respect to the chosen generator.
    """
    quot, embed, local_index = cyclic_relative_quotient(outer, inner)
    n_group = quot.group
    n = n_group.order
    gen = None
    for q in n_group.elements():
        if n_group.element_order(q) == n:
            gen = q
            break
    if gen is None:
        raise ConstructionError("outer/inner quotient is not cyclic", order=n)
    # discrete logs with respect to the generator
    dlog = {}
    x = n_group.identity
    for k in range(n):
        dlog[x] = k
        x = n_group.mul(x, gen)
    reps, coset_of = canonical_section(group, outer)
    t = group.table
    inv = group.inverses
    seen = set()
    total = 0
    for start, rep in enumerate(reps):
        if start in seen:
            continue
        # orbit of this coset under left multiplication by g
        orbit = []
        c = start
        while c not in seen:
            seen.add(c)
            orbit.append(c)
            c = coset_of[t[g][reps[c]]]
        f = len(orbit)
        x0 = reps[orbit[0]]
        gf = group.identity
        for _ in range(f):
            gf = t[g][gf]
        y = t[t[inv[x0]][gf]][x0]
        if y not in local_index:
            raise InternalCheckError("double-coset return element left the subgroup")
        total += dlog[quot.projection[local_index[y]]]
    return n_group.power(gen, total), quot


def transfer_surjectivity_check(group: FiniteGroup, sub: Subgroup) -> bool:
    """Whether the transfer onto a normal prime-order subgroup is surjective.

    For central N this is equivalent to cyclicity of the p-Sylow subgroup
    and the equivalence is asserted.  A noncentral N forces the zero
    transfer (conjugation equivariance lands the image in N^G = 1), which
    is likewise asserted.
    """
    p = sub.order
    if not is_normal(group, sub):
        raise ConstructionError("subgroup is not normal")
    if any(p % d == 0 for d in range(2, p)) or p < 2:
        raise ConstructionError("subgroup order is not prime", order=p)
    f = transfer(group, sub)
    surjective = image_of_hom(f).group.order == f.codomain.order
    central = all(group.conj(g, x) == x for g in group.elements() for x in sub.elements)
    if central:
        if surjective != sylow(group, p).is_cyclic():
            raise InternalCheckError(
                "transfer surjectivity disagrees with Sylow cyclicity",
                order=group.order, p=p)
    elif surjective:
        raise InternalCheckError(
            "transfer onto a noncentral prime-order subgroup cannot be surjective",
            order=group.order, p=p)
    return surjective

