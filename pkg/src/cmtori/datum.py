"""Norm-torus data: a finite group with marked subgroup pairs.

A datum (G, [(H_i, N~_i)]_i, D) abstracts a tower of number fields: H_i
fixes the extension field, N~_i fixes the base field (H_i inside N~_i),
and D collects decomposition groups.  Every cyclic subgroup of G is a
decomposition group of some unramified prime, so the cyclic floor can be
adjoined; ramified and archimedean primes may contribute more, which only
the caller can know (the ``declared_complete`` flag records that claim).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .abelian import FinAb
from .errors import DatumError
from .groups import (
    FiniteGroup,
    Subgroup,
    center,
    cyclic_subgroups_up_to_conjugacy,
    dedupe_up_to_conjugacy,
    is_normal,
    subgroup_generated,
)


@dataclass(frozen=True)
class TorusPair:
    """inner = Gal(L/extension field), outer = Gal(L/base field); inner <= outer."""

    inner: Subgroup
    outer: Subgroup

    def __post_init__(self):
        if self.inner.group != self.outer.group:
            raise DatumError("pair subgroups live in different groups")
        if not self.outer.contains_subgroup(self.inner):
            raise DatumError("inner subgroup not contained in outer subgroup")

    @property
    def relative_degree(self) -> int:
        return self.outer.order // self.inner.order


@dataclass(frozen=True)
class NormTorusDatum:
    group: FiniteGroup
    pairs: tuple[TorusPair, ...]
    iota: int | None = None
    decomposition_groups: tuple[Subgroup, ...] = ()
    include_all_cyclic: bool = True
    declared_complete: bool = False

    def __post_init__(self):
        g = self.group
        for pair in self.pairs:
            if pair.inner.group != g:
                raise DatumError("pair subgroups belong to a different group")
        for d in self.decomposition_groups:
            if d.group != g:
                raise DatumError("decomposition subgroup belongs to a different group")
        if self.iota is not None:
            i = self.iota
            if not (0 <= i < g.order):
                raise DatumError("iota out of range", iota=i)
            if g.element_order(i) != 2:
                raise DatumError("iota must have order 2", iota=i)
            if i not in center(g):
                raise DatumError("iota must be central", iota=i)
            for k, pair in enumerate(self.pairs):
                if pair.relative_degree != 2:
                    raise DatumError("CM pair must have relative degree 2", pair=k)
                if i not in pair.outer or i in pair.inner:
                    raise DatumError(
                        "iota must land on the involution of each relative quotient",
                        pair=k)

    @property
    def is_cm(self) -> bool:
        return self.iota is not None

    @property
    def rank(self) -> int:
        return len(self.pairs)

    def relative_degree_product(self) -> int:
        out = 1
        for pair in self.pairs:
            out *= pair.relative_degree
        return out

    def cyclic_relative_quotients(self) -> bool:
        """Each inner normal in its outer with cyclic quotient (fast-path flag)."""
        return _cyclic_relative_quotients(self)

    def normal_outer(self) -> bool:
        return _normal_outer(self)

    def effective_decomposition_set(self) -> tuple[Subgroup, ...]:
        """User groups, the cyclic floor when requested, the archimedean group
        generated by iota, all deduplicated up to conjugacy."""
        return _effective_decomposition_set(self)


@lru_cache(maxsize=1024)
def _cyclic_relative_quotients(datum: NormTorusDatum) -> bool:
    from .transfer import cyclic_relative_quotient

    for pair in datum.pairs:
        local, embed = pair.outer.as_group()
        local_index = {p: i for i, p in enumerate(embed)}
        inner_local = Subgroup(local, tuple(sorted(local_index[h] for h in pair.inner.elements)))
        if not is_normal(local, inner_local):
            return False
        quot, _, _ = cyclic_relative_quotient(pair.outer, pair.inner)
        n = quot.group
        if not any(n.element_order(x) == n.order for x in n.elements()):
            return False
    return True


@lru_cache(maxsize=1024)
def _normal_outer(datum: NormTorusDatum) -> bool:
    return all(is_normal(datum.group, pair.outer) for pair in datum.pairs)


@lru_cache(maxsize=1024)
def _effective_decomposition_set(datum: NormTorusDatum) -> tuple[Subgroup, ...]:
    groups = list(datum.decomposition_groups)
    if datum.include_all_cyclic:
        groups.extend(cyclic_subgroups_up_to_conjugacy(datum.group))
    if datum.iota is not None:
        groups.append(subgroup_generated(datum.group, [datum.iota]))
    if not groups:
        return ()
    return tuple(dedupe_up_to_conjugacy(datum.group, groups))


@dataclass(frozen=True)
class TamagawaReport:
    """Engine output; tau is exact and is only a lower bound unless ``exact``."""

    h1_torus: FinAb            # H^1 of the torus character lattice
    h1_norm_one: FinAb         # H^1 of the norm-one character lattice
    primitive_order: int       # order of the primitive part of H^2(Z)
    sha2: FinAb                # Sha^2 of the torus character lattice
    tau: Fraction
    n_k: int | None            # global norm index (CM data only)
    exact: bool

    def __post_init__(self):
        if self.sha2.order * self.h1_norm_one.order != self.h1_torus.order * self.primitive_order:
            raise DatumError(
                "four-term exactness violated",
                sha2=self.sha2.order, h1_norm_one=self.h1_norm_one.order,
                h1_torus=self.h1_torus.order, primitive=self.primitive_order)
