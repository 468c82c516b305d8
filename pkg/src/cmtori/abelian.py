"""Exact arithmetic with finite abelian groups.

Everything is built on Smith normal form over Z with arbitrary-precision
integers.  Groups are kept in invariant-factor form (d_1 | d_2 | ... | d_k,
each >= 2, empty tuple = trivial group) and all homomorphisms are integer
matrices relative to the canonical generators, so results are exactly
reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product

from .errors import InternalCheckError

Matrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# plain integer matrices (tuples of row tuples)
# ---------------------------------------------------------------------------

def zeros(rows: int, cols: int) -> Matrix:
    return tuple(tuple(0 for _ in range(cols)) for _ in range(rows))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} * {len(b)}x{len(b[0])}")
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out.append(tuple(sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)))
    return tuple(out)


def mat_vec(a: Matrix, v):
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def transpose(a: Matrix) -> Matrix:
    if not a:
        return ()
    return tuple(zip(*a))


def mat_hstack(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return b
    if not b:
        return a
    return tuple(ra + rb for ra, rb in zip(a, b))


@dataclass(frozen=True)
class SmithForm:
    """u * m * v = d with u, v unimodular and d diagonal, d_1 | d_2 | ..."""

    u: Matrix
    d: Matrix
    v: Matrix
    u_inv: Matrix
    v_inv: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.d[i][i] for i in range(min(len(self.d), len(self.d[0]) if self.d else 0)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(m: Matrix) -> SmithForm:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Pivots on the smallest-magnitude nonzero entry to bound coefficient
    growth.  Diagonal entries are nonnegative and satisfy the divisibility
    chain; all four transformation matrices are returned.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    a = [list(row) for row in m]
    for row in a:
        if len(row) != nc:
            raise ValueError("ragged matrix")
    u = [list(row) for row in identity(nr)]
    u_inv = [list(row) for row in identity(nr)]
    v = [list(row) for row in identity(nc)]
    v_inv = [list(row) for row in identity(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in u_inv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_row(i, j, q):
        # row_i += q * row_j
        ai, aj = a[i], a[j]
        for k in range(nc):
            ai[k] += q * aj[k]
        ui, uj = u[i], u[j]
        for k in range(nr):
            ui[k] += q * uj[k]
        for r in u_inv:
            r[j] -= q * r[i]

    def add_col(i, j, q):
        # col_i += q * col_j
        for r in a:
            r[i] += q * r[j]
        for r in v:
            r[i] += q * r[j]
        vi, vj = v_inv[i], v_inv[j]
        for k in range(nc):
            vj[k] -= q * vi[k]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in u_inv:
            r[i] = -r[i]

    t = 0
    limit = min(nr, nc)
    while t < limit:
        # locate smallest-magnitude nonzero entry in the trailing block
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            # clear column t below the pivot, restarting if a remainder shrinks the pivot
            restart = False
            for i in range(t + 1, nr):
                x = a[i][t]
                if x == 0:
                    continue
                q = x // a[t][t]
                add_row(i, t, -q)
                if a[i][t] != 0:
                    swap_rows(t, i)
                    restart = True
                    break
            if restart:
                continue
            for j in range(t + 1, nc):
                x = a[t][j]
                if x == 0:
                    continue
                q = x // a[t][t]
                add_col(j, t, -q)
                if a[t][j] != 0:
                    swap_cols(t, j)
                    restart = True
                    break
            if restart:
                continue
            # pivot must divide every entry of the trailing submatrix
            piv = a[t][t]
            bad = None
            for i in range(t + 1, nr):
                row = a[i]
                for j in range(t + 1, nc):
                    if row[j] % piv != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    d = tuple(tuple(row) for row in a)
    form = SmithForm(
        u=tuple(tuple(r) for r in u),
        d=d,
        v=tuple(tuple(r) for r in v),
        u_inv=tuple(tuple(r) for r in u_inv),
        v_inv=tuple(tuple(r) for r in v_inv),
    )
    return form


def solve_matrix(a: Matrix, b: Matrix):
    """One integer solution x of a @ x = b, or None if none exists."""
    nr = len(a)
    nc = len(a[0]) if nr else 0
    bc = len(b[0]) if b else 0
    if len(b) != nr:
        raise ValueError("right-hand side has wrong height")
    if nr == 0:
        return zeros(nc, bc)
    s = smith_normal_form(a)
    ub = mat_mul(s.u, b)
    diag = s.diagonal
    y = [[0] * bc for _ in range(nc)]
    for i in range(nr):
        di = diag[i] if i < len(diag) else 0
        for j in range(bc):
            val = ub[i][j]
            if di == 0:
                if val != 0:
                    return None
            else:
                if val % di != 0:
                    return None
                if i < nc:
                    y[i][j] = val // di
    return mat_mul(s.v, tuple(tuple(r) for r in y))


def kernel_basis(a: Matrix, cols: int) -> Matrix:
    """Columns generating the integer kernel lattice of ``a`` (cols columns)."""
    if cols == 0:
        return ()
    if not a:
        return identity(cols)
    s = smith_normal_form(a)
    rank = s.rank
    # kernel basis = columns of v beyond the rank
    basis = []
    for j in range(rank, cols):
        basis.append(tuple(s.v[i][j] for i in range(cols)))
    # return as a matrix whose columns are the basis vectors
    return transpose(tuple(basis)) if basis else tuple(tuple() for _ in range(cols))


# ---------------------------------------------------------------------------
# finite abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinAb:
    """Finite abelian group in invariant-factor form."""

    factors: tuple[int, ...]

    def __post_init__(self):
        prev = None
        for d in self.factors:
            if d < 2:
                raise InternalCheckError("invariant factor < 2", factor=d)
            if prev is not None and d % prev != 0:
                raise InternalCheckError("divisibility chain broken", factors=self.factors)
            prev = d

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) <= 1

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def element(self, coords) -> "AbElement":
        coords = tuple(int(c) % d for c, d in zip(coords, self.factors, strict=True))
        return AbElement(self, coords)

    def zero(self) -> "AbElement":
        return AbElement(self, tuple(0 for _ in self.factors))

    def elements(self):
        for coords in iter_product(*(range(d) for d in self.factors)):
            yield AbElement(self, coords)

    def __repr__(self):
        if not self.factors:
            return "FinAb(0)"
        return "FinAb(" + " + ".join(f"Z/{d}" for d in self.factors) + ")"


@dataclass(frozen=True)
class AbElement:
    group: FinAb
    coords: tuple[int, ...]

    def __add__(self, other: "AbElement") -> "AbElement":
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return self.group.element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AbElement":
        return self.group.element(tuple(-a for a in self.coords))

    def __sub__(self, other: "AbElement") -> "AbElement":
        return self + (-other)

    def scaled(self, n: int) -> "AbElement":
        return self.group.element(tuple(n * a for a in self.coords))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self) -> int:
        n = 1
        for c, d in zip(self.coords, self.group.factors):
            if c:
                n = math.lcm(n, d // math.gcd(c, d))
        return n


@dataclass(frozen=True)
class AbHom:
    """Homomorphism between finite abelian groups as an integer matrix.

    Column j is the image of the j-th canonical generator of the domain,
    written in codomain coordinates; entries are reduced mod the codomain
    invariant factors.
    """

    domain: FinAb
    codomain: FinAb
    matrix: Matrix

    def __post_init__(self):
        rows = self.codomain.rank
        cols = self.domain.rank
        m = self.matrix
        if len(m) != rows or any(len(r) != cols for r in m):
            raise InternalCheckError(
                "hom matrix has wrong shape",
                expected=(rows, cols), got=(len(m), len(m[0]) if m else 0))
        reduced = tuple(
            tuple(m[i][j] % self.codomain.factors[i] for j in range(cols))
            for i in range(rows))
        if reduced != m:
            object.__setattr__(self, "matrix", reduced)
        # respect generator orders: d_j * column_j = 0 in the codomain
        for j in range(cols):
            dj = self.domain.factors[j]
            for i in range(rows):
                if (dj * self.matrix[i][j]) % self.codomain.factors[i] != 0:
                    raise InternalCheckError(
                        "matrix does not respect generator orders",
                        row=i, col=j, value=self.matrix[i][j])

    def __call__(self, el: AbElement) -> AbElement:
        if el.group != self.domain:
            raise ValueError("element not in the domain")
        return self.codomain.element(mat_vec(self.matrix, el.coords))

    def compose(self, inner: "AbHom") -> "AbHom":
        """self o inner (shape-explicit so zero-rank factors behave)."""
        if inner.codomain != self.domain:
            raise ValueError("composition mismatch")
        rows = self.codomain.rank
        mid = self.domain.rank
        cols = inner.domain.rank
        m = tuple(
            tuple(sum(self.matrix[i][k] * inner.matrix[k][j] for k in range(mid))
                  for j in range(cols))
            for i in range(rows))
        return AbHom(inner.domain, self.codomain, m)

    @property
    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.matrix)


def identity_hom(a: FinAb) -> AbHom:
    return AbHom(a, a, identity(a.rank))


def zero_hom(domain: FinAb, codomain: FinAb) -> AbHom:
    return AbHom(domain, codomain, zeros(codomain.rank, domain.rank))


def hom_sum(f: AbHom, g: AbHom) -> AbHom:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ValueError("hom sum shape mismatch")
    m = tuple(tuple(x + y for x, y in zip(rf, rg)) for rf, rg in zip(f.matrix, g.matrix))
    return AbHom(f.domain, f.codomain, m)


def _relation_lattice(p: Matrix, orders, ncols: int) -> Matrix:
    """Columns generating {y : p*y = 0 mod orders} for a coord matrix p."""
    rows = len(orders)
    if ncols == 0:
        return ()
    diag = tuple(tuple(orders[i] if i == j else 0 for j in range(rows)) for i in range(rows))
    stacked = mat_hstack(p, diag) if rows else zeros(0, ncols + rows)
    full = kernel_basis(stacked, ncols + rows)
    if not full or not full[0]:
        return tuple(tuple() for _ in range(ncols))
    return tuple(full[i] for i in range(ncols))


@dataclass(frozen=True)
class SubgroupData:
    """A subgroup of an ambient FinAb, with its canonical inclusion."""

    group: FinAb
    inclusion: AbHom  # group -> ambient

    @property
    def order(self) -> int:
        return self.group.order


def subgroup_of(ambient: FinAb, generators) -> SubgroupData:
    """The subgroup generated by the given elements, in invariant-factor form."""
    gens = list(generators)
    for g in gens:
        if g.group != ambient:
            raise ValueError("generator not in the ambient group")
    m = len(gens)
    ra = ambient.rank
    p = tuple(tuple(g.coords[i] for g in gens) for i in range(ra))
    rel = _relation_lattice(p, ambient.factors, m)
    if m == 0:
        return SubgroupData(FinAb(()), zero_hom(FinAb(()), ambient))
    s = smith_normal_form(rel)
    diag = s.diagonal
    if len(diag) < m or any(x == 0 for x in diag):
        raise InternalCheckError("subgroup relation lattice has deficient rank")
    keep = [j for j in range(m) if diag[j] > 1]
    sub = FinAb(tuple(diag[j] for j in keep))
    # new generators are P * u_inv columns
    pu = mat_mul(p, s.u_inv)
    incl = tuple(tuple(pu[i][j] for j in keep) for i in range(ra))
    return SubgroupData(sub, AbHom(sub, ambient, incl))


def cokernel_of_hom(f: AbHom) -> tuple[FinAb, AbHom]:
    """(codomain / image, projection)."""
    ra = f.codomain.rank
    diag = tuple(tuple(f.codomain.factors[i] if i == j else 0 for j in range(ra))
                 for i in range(ra))
    stacked = mat_hstack(f.matrix, diag)
    if ra == 0:
        return FinAb(()), zero_hom(f.codomain, FinAb(()))
    s = smith_normal_form(stacked)
    diag_entries = s.diagonal
    if len(diag_entries) < ra or any(x == 0 for x in diag_entries):
        raise InternalCheckError("cokernel is not finite")
    keep = [i for i in range(ra) if diag_entries[i] > 1]
    quot = FinAb(tuple(diag_entries[i] for i in keep))
    proj = tuple(tuple(s.u[i][j] for j in range(ra)) for i in keep)
    return quot, AbHom(f.codomain, quot, proj)


def kernel_of_hom(f: AbHom) -> SubgroupData:
    """Kernel as a subgroup of the domain."""
    rel = _relation_lattice(f.matrix, f.codomain.factors, f.domain.rank)
    gens = []
    if rel and rel[0]:
        cols = len(rel[0])
        for j in range(cols):
            gens.append(f.domain.element(tuple(rel[i][j] for i in range(f.domain.rank))))
    return subgroup_of(f.domain, gens)


def image_of_hom(f: AbHom) -> SubgroupData:
    cols = [f.codomain.element(tuple(f.matrix[i][j] for i in range(f.codomain.rank)))
            for j in range(f.domain.rank)]
    return subgroup_of(f.codomain, cols)


def dual_group(a: FinAb) -> FinAb:
    """Hom(A, Q/Z); same invariant factors in the canonical pairing."""
    return FinAb(a.factors)


def dual_hom(f: AbHom) -> AbHom:
    """Pontryagin dual, reversing arrows.

    With chi_j the character sending the j-th generator to 1/d_j, the dual
    matrix entry is d^dom_j * m_ij / d^cod_i (an exact integer because the
    matrix respects generator orders).
    """
    dx = f.domain.factors
    dy = f.codomain.factors
    m = f.matrix
    out = tuple(
        tuple((dx[j] * m[i][j]) // dy[i] for i in range(len(dy)))
        for j in range(len(dx)))
    return AbHom(dual_group(f.codomain), dual_group(f.domain), out)


def pairing(char: AbElement, el: AbElement):
    """chi(x) in Q/Z returned as a Fraction-free (num, den) with den = exponent."""
    a = el.group
    if char.group != dual_group(a):
        raise ValueError("character of a different group")
    den = a.exponent if a.factors else 1
    num = 0
    for c, x, d in zip(char.coords, el.coords, a.factors):
        num += c * x * (den // d)
    return num % den, den


def annihilator(a: FinAb, generators) -> SubgroupData:
    """Characters vanishing on the subgroup generated by ``generators``.

    Returned as a subgroup of dual_group(a); |Ann(W)| * |W| = |A|.
    """
    sub = subgroup_of(a, generators)
    return kernel_of_hom(dual_hom(sub.inclusion))


def factor_through(incl: AbHom, f: AbHom) -> AbHom:
    """g with incl o g = f, for injective ``incl`` whose image contains im f."""
    if incl.codomain != f.codomain:
        raise ValueError("codomain mismatch")
    ra = incl.codomain.rank
    rs = incl.domain.rank
    diag = tuple(tuple(incl.codomain.factors[i] if i == j else 0 for j in range(ra))
                 for i in range(ra))
    stacked = mat_hstack(incl.matrix, diag)
    sol = solve_matrix(stacked, f.matrix)
    if sol is None:
        raise InternalCheckError("image is not contained in the subgroup")
    g = tuple(sol[i] for i in range(rs))
    return AbHom(f.domain, incl.domain, g)


@dataclass(frozen=True)
class DirectSum:
    group: FinAb
    injections: tuple[AbHom, ...]
    projections: tuple[AbHom, ...]


def direct_sum(parts) -> DirectSum:
    """Canonicalized direct sum with injection and projection maps."""
    parts = tuple(parts)
    all_factors = [d for p in parts for d in p.factors]
    m = len(all_factors)
    if m == 0:
        triv = FinAb(())
        return DirectSum(triv, tuple(identity_hom(p) if p.rank == 0 else zero_hom(p, triv)
                                     for p in parts),
                         tuple(identity_hom(p) if p.rank == 0 else zero_hom(triv, p)
                               for p in parts))
    diag = tuple(tuple(all_factors[i] if i == j else 0 for j in range(m)) for i in range(m))
    s = smith_normal_form(diag)
    entries = s.diagonal
    keep = [i for i in range(m) if entries[i] > 1]
    total = FinAb(tuple(entries[i] for i in keep))
    offsets = []
    pos = 0
    for p in parts:
        offsets.append(pos)
        pos += p.rank
    injections = []
    projections = []
    for p, off in zip(parts, offsets):
        inj = tuple(tuple(s.u[i][off + j] for j in range(p.rank)) for i in keep)
        injections.append(AbHom(p, total, inj))
        proj = tuple(tuple(s.u_inv[off + i][keep[j]] for j in range(len(keep)))
                     for i in range(p.rank))
        projections.append(AbHom(total, p, proj))
    return DirectSum(total, tuple(injections), tuple(projections))


def stack_homs(homs, codomain_sum: DirectSum) -> AbHom:
    """Combine f_i : X -> A_i into X -> (+) A_i using the sum's injections."""
    homs = tuple(homs)
    if not homs:
        raise ValueError("need at least one hom")
    out = zero_hom(homs[0].domain, codomain_sum.group)
    for f, inj in zip(homs, codomain_sum.injections, strict=True):
        out = hom_sum(out, inj.compose(f))
    return out
