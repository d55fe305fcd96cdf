from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lieaut.catalog import load_catalog
from lieaut.lie import StructureTensor, ad_matrix, adjoint, bracket, heisenberg3, jacobi_check, killing_form
from lieaut.linalg import RatMatrix, mat_mul


CAT = load_catalog()


def unit(i, n=6):
    return [1 if j == i - 1 else 0 for j in range(n)]


def g61(a=1, b=1, c=1, d=1):
    return CAT.get("g_6_1").tensor({"alpha": a, "beta": b, "gamma": c, "delta": d})


def test_tensor_stores_upper_triangle_only():
    t = StructureTensor(3, {(1, 2, 3): 2})
    assert t.f(2, 1, 3) == -2
    assert t.nonzero() == {(1, 2, 3): Fraction(2)}
    with pytest.raises(ValueError):
        StructureTensor(3, {(2, 1, 3): 1})
    with pytest.raises(ValueError):
        StructureTensor(3, {(1, 1, 3): 1})


def test_bracket_examples():
    assert bracket(heisenberg3(), unit(1, 3), unit(2, 3)) == [0, 0, 1]
    assert bracket(heisenberg3(), unit(2, 3), unit(1, 3)) == [0, 0, -1]
    g = CAT.get("g_6_91").tensor()
    assert bracket(g, unit(2), unit(4)) == unit(1)
    assert bracket(g, unit(5), unit(6)) == [0, 0, -1, 0, 0, 0]


def test_jacobi_examples():
    assert jacobi_check(heisenberg3()).ok
    assert jacobi_check(StructureTensor.abelian(4)).ok
    broken = StructureTensor(3, {(1, 2, 3): 1, (1, 3, 1): 1})
    assert jacobi_check(broken).violations == [(1, 2, 3, 3, Fraction(-1))]


def test_flagged_entry_fails_jacobi_only_when_product_nonzero():
    e = CAT.get("N_6_25")
    bad = jacobi_check(e.tensor({"alpha": 1, "beta": 1}))
    assert [v[:4] for v in bad.violations] == [(1, 2, 3, 4)]
    assert jacobi_check(e.tensor({"alpha": 0, "beta": 1})).ok


def test_heisenberg_adjoint_entry():
    chi = adjoint(heisenberg3()).chi
    assert chi[0][1, 2] == -1
    assert sum(1 for x in chi[0].entries if x) == 1


def test_chi_of_g61_is_minus_structure_constants():
    # chi_6[j, k] = -f_6j^k = f_j6^k, so the diagonal carries +1, alpha, ...
    t = g61(Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7))
    chi6 = adjoint(t).chi[5]
    diag = [1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7), 0]
    assert chi6 == RatMatrix(6, 6, [diag[i] if i == j else 0 for i in range(6) for j in range(6)])
    ones = adjoint(g61()).chi[5]
    assert mat_mul(ones, ones) == RatMatrix(6, 6, [1 if i == j < 5 else 0 for i in range(6) for j in range(6)])


def test_y_matrices_share_the_constants():
    t = g61(2, 3, 5, 7)
    a = adjoint(t)
    for i in range(6):
        for j in range(6):
            for k in range(6):
                assert a.chi[i][j, k] == a.y[k][i, j] == -t.c[i][j][k]


def test_ad_matrix_rows_are_brackets():
    t = CAT.get("g_6_91").tensor()
    x = [1, 2, 0, -1, 3, 1]
    m = ad_matrix(t, x)
    for j in range(6):
        assert m.row(j) == tuple(bracket(t, x, unit(j + 1)))


def test_killing_form_examples():
    assert killing_form(g61()) == RatMatrix(6, 6, [5 if i == j == 5 else 0 for i in range(6) for j in range(6)])
    k = killing_form(g61(2, 3, 5, 7))
    assert k[5, 5] == 1 + 4 + 9 + 25 + 49
    for name in CAT.names("table3"):
        assert killing_form(CAT.get(name).tensor_at_sample(0)).is_zero(), name


vec = st.lists(st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)), min_size=6, max_size=6)
sound = [n for n in CAT.names() if n != "N_6_25"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sound), vec, vec, vec)
def test_bracket_is_antisymmetric_and_satisfies_jacobi(name, x, y, z):
    t = CAT.get(name).tensor_at_sample(0)
    assert bracket(t, x, y) == [-v for v in bracket(t, y, x)]
    total = [a + b + c for a, b, c in zip(bracket(t, x, bracket(t, y, z)), bracket(t, y, bracket(t, z, x)),
                                          bracket(t, z, bracket(t, x, y)))]
    assert not any(total)
