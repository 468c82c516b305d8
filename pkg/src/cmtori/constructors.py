"""Named field families as norm-torus data, with structural classifiers.

Each constructor returns the datum together with the tau value the
structure theory predicts; the engine recomputes tau independently and
the two must agree whenever the decomposition set is complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .datum import NormTorusDatum, TorusPair
from .engine import NK_ONE, density_bound, imaginary_quadratic_count, tamagawa
from .errors import DatumError
from .groups import (
    FiniteGroup,
    center,
    dihedral,
    full_subgroup,
    quaternion8,
    residues_of,
    subgroup_generated,
    trivial_subgroup,
    units_mod,
)
from .landau import is_prime_u64


# ---------------------------------------------------------------------------
# arithmetic helpers
# ---------------------------------------------------------------------------

def legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion; p must be an odd prime."""
    if p < 3 or p % 2 == 0 or not is_prime_u64(p):
        raise DatumError("legendre symbol needs an odd prime", p=p)
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def factorize(n: int) -> dict[int, int]:
    """Prime-power factorization by trial division then Brent's rho walk."""
    if n < 1 or n >= 1 << 63:
        raise DatumError("factorization supports 1 <= n < 2^63", n=n)
    out: dict[int, int] = {}

    def record(p):
        out[p] = out.get(p, 0) + 1

    for p in (2, 3, 5):
        while n % p == 0:
            record(p)
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while d * d <= n and d < 10 ** 6:
        while n % d == 0:
            record(d)
            n //= d
        d += wheel[w]
        w = (w + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime_u64(m):
            record(m)
            continue
        stack.extend(_brent_rho_split(m))
    return dict(sorted(out.items()))


def _brent_rho_split(n: int):
    """One nontrivial factorization n = a * b of an odd composite."""
    if n % 2 == 0:
        return [2, n // 2]
    c = 1
    while True:
        x = 2
        y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return [d, n // d]
        c += 1


def squarefree_part(n: int) -> int:
    part = 1
    for p, e in factorize(n).items():
        if e % 2:
            part *= p
    return part


# ---------------------------------------------------------------------------
# cyclotomic family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyResult:
    datum: NormTorusDatum
    predicted_tau: Fraction | None
    notes: tuple[str, ...] = ()


def cyclotomic(n: int) -> FamilyResult:
    """CM datum of the n-th cyclotomic field (n > 2, n odd or 4 | n).

    Decomposition groups: every cyclic subgroup arises from an unramified
    prime; each ramified prime p contributes inertia (the kernel of
    reduction mod n/p^a) extended by a Frobenius lift; the archimedean
    place contributes the complex conjugation.
    """
    if n <= 2 or (n % 2 == 0 and n % 4 != 0):
        raise DatumError("cyclotomic family needs n > 2 with n odd or 4 | n", n=n)
    g = units_mod(n)
    residues = residues_of(g)
    index = {r: i for i, r in enumerate(residues)}
    iota = index[n - 1]
    pair = TorusPair(trivial_subgroup(g), subgroup_generated(g, [iota]))
    ram = []
    for p in factorize(n):
        m = n
        while m % p == 0:
            m //= p
        inertia = [index[r] for r in residues if r % m == (1 % m)]
        # Frobenius lift: congruent to p mod m, to 1 mod the p-part
        pa = n // m
        frob = None
        for r in residues:
            if r % m == p % m and r % pa == 1 % pa:
                frob = index[r]
                break
        if frob is None:
            raise DatumError("no Frobenius lift found", p=p)
        ram.append(subgroup_generated(g, inertia + [frob]))
    datum = NormTorusDatum(g, (pair,), iota=iota,
                           decomposition_groups=tuple(ram),
                           include_all_cyclic=True, declared_complete=True)
    fact = factorize(n)
    if n == 4 or (len(fact) == 1 and 2 not in fact):
        predicted = Fraction(1)
    else:
        predicted = Fraction(2)
    return FamilyResult(datum, predicted)


# ---------------------------------------------------------------------------
# quaternion family
# ---------------------------------------------------------------------------

def q8_landau(p_value: int, q_value: int) -> FamilyResult:
    """Quaternion CM datum attached to integers P, Q with P-1 = a^2,
    Q-1 = P b^2, Q not a square.

    Every decomposition group is cyclic except at primes q | Q with
    (P/q) = -1, where it is the whole group; tau is 1/2 when no such
    prime exists and 2 otherwise.
    """
    failures = []
    if p_value < 1 or p_value % 2 == 0:
        failures.append("P must be odd and positive")
    if q_value < 1 or q_value % 2 == 0:
        failures.append("Q must be odd and positive")
    if p_value >= 1 and math.isqrt(p_value) ** 2 == p_value:
        failures.append("P is a perfect square")
    if p_value >= 1 and math.isqrt(p_value - 1) ** 2 != p_value - 1:
        failures.append("P - 1 is not a perfect square")
    if q_value >= 1 and p_value >= 1:
        rem = q_value - 1
        if rem % p_value != 0 or math.isqrt(rem // p_value) ** 2 != rem // p_value:
            failures.append("Q - 1 is not P times a perfect square")
    if q_value >= 1 and math.isqrt(q_value) ** 2 == q_value:
        failures.append("Q is a perfect square")
    if failures:
        raise DatumError("; ".join(failures), P=p_value, Q=q_value)
    g = quaternion8()
    pair = TorusPair(trivial_subgroup(g), center(g))
    legendre_table = {}
    noncyclic = False
    for q in factorize(q_value):
        symbol = legendre(p_value, q)
        legendre_table[q] = symbol
        if symbol == -1:
            noncyclic = True
    extras = (full_subgroup(g),) if noncyclic else ()
    datum = NormTorusDatum(g, (pair,), iota=1, decomposition_groups=extras,
                           include_all_cyclic=True, declared_complete=True)
    predicted = Fraction(2) if noncyclic else Fraction(1, 2)
    notes = tuple(f"({p_value}/{q}) = {s}" for q, s in sorted(legendre_table.items()))
    return FamilyResult(datum, predicted, notes)


# ---------------------------------------------------------------------------
# dihedral and abelian classifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DihedralResult:
    datum: NormTorusDatum
    structural_tau: Fraction
    engine_lower_bound: Fraction
    s_count: int


def dihedral_cm(n: int) -> DihedralResult:
    """Dihedral CM datum of order 2n; n must be even for a central involution."""
    if n % 2 != 0 or n < 2:
        raise DatumError(
            "dihedral CM field needs even n: odd dihedral groups have no "
            "central involution", n=n)
    g = dihedral(n)
    iota = n // 2
    pair = TorusPair(trivial_subgroup(g), subgroup_generated(g, [iota]))
    datum = NormTorusDatum(g, (pair,), iota=iota, include_all_cyclic=True,
                           declared_complete=False)
    count, verdict = density_bound(g, iota)
    if verdict != NK_ONE:
        raise DatumError("density bound unexpectedly weak", count=count)
    report = tamagawa(datum)
    return DihedralResult(datum, Fraction(2), report.tau, count)


@dataclass(frozen=True)
class ClassifierResult:
    value: Fraction | None         # None when only an interval is known
    interval: tuple[Fraction, ...]
    engine_tau: Fraction
    reason: str


def _cm_datum_for(group: FiniteGroup, iota: int) -> NormTorusDatum:
    pair = TorusPair(trivial_subgroup(group), subgroup_generated(group, [iota]))
    return NormTorusDatum(group, (pair,), iota=iota, include_all_cyclic=True)


def abelian_classifier(group: FiniteGroup, iota: int) -> ClassifierResult:
    """tau of an abelian Galois CM field: 1 when the half-degree is odd,
    2 when the involution splits off, otherwise the interval {1, 2}."""
    if not group.is_abelian():
        raise DatumError("abelian classifier needs an abelian group")
    if group.element_order(iota) != 2:
        raise DatumError("iota must have order 2")
    datum = _cm_datum_for(group, iota)
    engine_tau = tamagawa(datum).tau
    half = group.order // 2
    if half % 2 == 1:
        return ClassifierResult(Fraction(1), (Fraction(1),), engine_tau,
                                "odd half-degree")
    count, _ = imaginary_quadratic_count(group, iota)
    if count >= 1:
        # an index-2 subgroup avoiding iota splits the sequence
        return ClassifierResult(Fraction(2), (Fraction(2),), engine_tau,
                                "involution splits off, even half-degree")
    return ClassifierResult(None, (Fraction(1), Fraction(2)), engine_tau,
                            "non-split with even half-degree")


def split_classifier(group: FiniteGroup, iota: int) -> ClassifierResult:
    """tau for a split involution sequence; delegates to the two-torsion
    obstruction class when the complement has odd abelianization."""
    if group.element_order(iota) != 2 or iota not in center(group):
        raise DatumError("iota must be a central involution")
    datum = _cm_datum_for(group, iota)
    from .cohomology import _complement_of_involution

    complement = _complement_of_involution(datum)
    if complement is None:
        raise DatumError("involution sequence does not split")
    engine_tau = tamagawa(datum).tau
    half = group.order // 2
    if half % 2 == 1:
        return ClassifierResult(Fraction(1), (Fraction(1),), engine_tau,
                                "odd half-degree")
    local, _ = complement.as_group()
    from .groups import abelianization

    gab = abelianization(local).group.order
    if gab % 2 == 0:
        return ClassifierResult(Fraction(2), (Fraction(2),), engine_tau,
                                "complement has even abelianization")
    from .cohomology import DEFAULT_BUDGET, xi_obstruction

    tau, details = xi_obstruction(datum, DEFAULT_BUDGET)
    return ClassifierResult(tau, (tau,), engine_tau,
                            f"two-torsion obstruction: {details}")
