import math
import random

import pytest

from cmtori.abelian import (
    AbHom,
    FinAb,
    annihilator,
    cokernel_of_hom,
    direct_sum,
    dual_group,
    dual_hom,
    factor_through,
    identity,
    image_of_hom,
    kernel_basis,
    kernel_of_hom,
    mat_mul,
    pairing,
    smith_normal_form,
    solve_matrix,
    subgroup_of,
    zero_hom,
)


def det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def check_snf(m):
    s = smith_normal_form(m)
    assert mat_mul(mat_mul(s.u, m), s.v) == s.d
    assert mat_mul(s.u, s.u_inv) == identity(len(m))
    cols = len(m[0]) if m else 0
    assert mat_mul(s.v, s.v_inv) == identity(cols)
    diag = s.diagonal
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    # off-diagonal must vanish
    for i, row in enumerate(s.d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    return s


def test_snf_zero_matrix():
    s = check_snf(((0, 0), (0, 0)))
    assert s.diagonal == (0, 0)
    assert s.u == identity(2) and s.v == identity(2)


def test_snf_identity():
    s = check_snf(identity(3))
    assert s.diagonal == (1, 1, 1)


def test_snf_hand_example():
    # gcd of entries 2, determinant -8 -> diag(2, 4)
    s = check_snf(((2, 4), (6, 8)))
    assert s.diagonal == (2, 4)
    assert abs(det(s.u)) == 1 and abs(det(s.v)) == 1


def test_snf_random_small():
    rng = random.Random(7)
    for _ in range(60):
        r = rng.randrange(0, 5)
        c = rng.randrange(0, 5)
        m = tuple(tuple(rng.randrange(-9, 10) for _ in range(c)) for _ in range(r))
        if r and c:
            check_snf(m)


def test_snf_random_larger_and_structured():
    rng = random.Random(13)
    for _ in range(10):
        r = rng.randrange(6, 13)
        c = rng.randrange(4, 9)
        m = tuple(tuple(rng.randrange(-50, 51) for _ in range(c)) for _ in range(r))
        check_snf(m)
    # rank-deficient: repeated and scaled rows
    base = tuple(rng.randrange(-20, 21) for _ in range(6))
    m = (base, tuple(2 * x for x in base), tuple(-x for x in base),
         tuple(rng.randrange(-20, 21) for _ in range(6)))
    s = check_snf(m)
    assert sum(1 for x in s.diagonal if x) <= 2


def test_solve_matrix():
    a = ((2, 0), (0, 3))
    b = ((4,), (9,))
    x = solve_matrix(a, b)
    assert mat_mul(a, x) == b
    assert solve_matrix(a, ((1,), (0,))) is None


def test_kernel_basis():
    k = kernel_basis(((1, 1, 1),), 3)
    assert len(k[0]) == 2
    for j in range(2):
        assert sum(k[i][j] for i in range(3)) == 0


def test_finab_validation():
    FinAb((2, 4, 8))
    with pytest.raises(Exception):
        FinAb((3, 4))
    with pytest.raises(Exception):
        FinAb((1,))


def test_kernel_identity_on_z4_is_trivial():
    z4 = FinAb((4,))
    f = AbHom(z4, z4, ((1,),))
    assert kernel_of_hom(f).group.is_trivial


def test_kernel_of_doubling_on_z4():
    z4 = FinAb((4,))
    f = AbHom(z4, z4, ((2,),))
    ker = kernel_of_hom(f)
    assert ker.group.factors == (2,)
    # the kernel is {0, 2}
    gen = ker.inclusion(ker.group.element((1,)))
    assert gen.coords == (2,)


def test_image_of_zero_map_trivial():
    a = FinAb((4, 8))
    f = zero_hom(a, a)
    assert image_of_hom(f).group.is_trivial


def test_dual_group_self_dual_factors():
    assert dual_group(FinAb(())).is_trivial
    assert dual_group(FinAb((2, 4))).factors == (2, 4)


def test_dual_of_doubling_map():
    # f: Z/4 -> Z/2, x -> x mod 2 is surjective; its dual Z/2 -> Z/4 has image of order 2
    z4, z2 = FinAb((4,)), FinAb((2,))
    f = AbHom(z4, z2, ((1,),))
    fd = dual_hom(f)
    assert fd.domain.factors == (2,) and fd.codomain.factors == (4,)
    assert image_of_hom(fd).group.order == 2


def test_double_dual_is_identity_on_matrices():
    rng = random.Random(3)
    for _ in range(40):
        dom = FinAb(tuple(sorted(rng.choice([(2,), (4,), (2, 4), (3,), (6,), (2, 2)]))))
        cod = FinAb(tuple(sorted(rng.choice([(2,), (4,), (2, 6), (3,), (12,), (2, 2)]))))
        # build a valid random hom: entry must satisfy the order constraint
        rows = []
        for i, di in enumerate(cod.factors):
            row = []
            for j, dj in enumerate(dom.factors):
                g = di // math.gcd(di, dj)
                row.append(g * rng.randrange(0, max(1, di // g)))
            rows.append(tuple(row))
        f = AbHom(dom, cod, tuple(rows))
        assert dual_hom(dual_hom(f)).matrix == f.matrix


def test_dual_contravariant_on_composition():
    a, b, c = FinAb((4,)), FinAb((4, 4)), FinAb((2,))
    f = AbHom(a, b, ((1,), (3,)))
    g = AbHom(b, c, ((1, 1),))
    assert dual_hom(g.compose(f)).matrix == dual_hom(f).compose(dual_hom(g)).matrix


def test_kernel_image_orders_multiply():
    rng = random.Random(11)
    shapes = [(2,), (4,), (2, 2), (2, 4), (3,), (6,), (2, 2, 2), (9,), (2, 6)]
    for _ in range(80):
        dom = FinAb(rng.choice(shapes))
        cod = FinAb(rng.choice(shapes))
        rows = []
        for di in cod.factors:
            row = []
            for dj in dom.factors:
                g = di // math.gcd(di, dj)
                row.append(g * rng.randrange(0, max(1, di // g)))
            rows.append(tuple(row))
        f = AbHom(dom, cod, tuple(rows))
        assert kernel_of_hom(f).group.order * image_of_hom(f).group.order == dom.order


def test_subgroup_of_and_cokernel():
    a = FinAb((2, 4))
    sub = subgroup_of(a, [a.element((1, 2))])
    assert sub.group.factors == (2,)
    quot, proj = cokernel_of_hom(sub.inclusion)
    assert quot.order * sub.group.order == a.order
    assert proj(sub.inclusion(sub.group.element((1,)))).is_zero


def test_annihilator_orders():
    a = FinAb((4,))
    ann = annihilator(a, [a.element((2,))])
    assert ann.group.order == 2
    # characters annihilating <2> are exactly the even ones
    chi = ann.inclusion(ann.group.element((1,)))
    num, den = pairing(chi, a.element((2,)))
    assert num == 0
    assert annihilator(a, []).group.order == a.order
    assert annihilator(a, [a.element((1,))]).group.is_trivial


def test_annihilator_order_product_random():
    rng = random.Random(5)
    shapes = [(2,), (4,), (2, 2), (2, 4), (3,), (6,), (2, 6), (8,), (2, 2, 2), (12,)]
    for _ in range(60):
        a = FinAb(rng.choice(shapes))
        if a.order > 200:
            continue
        gens = [a.element(tuple(rng.randrange(d) for d in a.factors))
                for _ in range(rng.randrange(0, 3))]
        w = subgroup_of(a, gens)
        ann = annihilator(a, gens)
        assert ann.group.order * w.group.order == a.order
        for chi_c in ann.group.elements():
            chi = ann.inclusion(chi_c)
            for g in gens:
                num, _ = pairing(chi, g)
                assert num == 0


def test_direct_sum_canonicalizes():
    ds = direct_sum([FinAb((2,)), FinAb((3,))])
    assert ds.group.factors == (6,)
    ds2 = direct_sum([FinAb((2,)), FinAb((2,))])
    assert ds2.group.factors == (2, 2)
    # projections invert injections
    for part, inj, proj in zip([FinAb((2,)), FinAb((3,))], ds.injections, ds.projections):
        for x in part.elements():
            assert proj(inj(x)) == x


def test_factor_through():
    a = FinAb((4,))
    sub = subgroup_of(a, [a.element((2,))])
    f = AbHom(FinAb((2,)), a, ((2,),))
    g = factor_through(sub.inclusion, f)
    assert sub.inclusion.compose(g).matrix == f.matrix
