from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cohw.exactla import (
    Gaussian, I, conjugate_fixed, complement_basis, coords_in_basis,
    format_scalar, in_span, kernel_basis, mat_vec, parse_scalar, rank,
    rref, solve_affine, span_echelon, subspace_intersect, subspace_ops,
    subspace_sum, vec_add, vec_is_zero, vec_scale, vec_sub, FilteredSpace,
)

F = Fraction


def test_gaussian_arithmetic():
    z = Gaussian(1, 2)
    w = Gaussian(3, -1)
    assert z + w == Gaussian(4, 1)
    assert z * w == Gaussian(5, 5)
    assert z.conj() == Gaussian(1, -2)
    assert (z / w) * w == z
    assert I * I == Gaussian(-1)
    assert Gaussian(F(1, 2)) == F(1, 2)


def test_scalar_formatting_round_trip():
    assert format_scalar(F(-3, 4)) == "-3/4"
    assert format_scalar(Gaussian(F(1, 2), F(-2, 3))) == "1/2-2/3*i"
    assert format_scalar(Gaussian(0, 1)) == "1*i"
    for s in ["1/2", "-7", "1/2-2/3*i", "3*i", "-1/5+1*i", "0"]:
        x = parse_scalar(s, "Qi")
        assert format_scalar(x) == s or format_scalar(Gaussian(x)) == s


def test_solve_identity():
    A = [[F(1), F(0)], [F(0), F(1)]]
    x, ker = solve_affine(A, [F(3), F(-5)])
    assert x == [F(3), F(-5)]
    assert ker == []


def test_solve_inconsistent():
    A = [[F(0), F(0)]]
    x, ker = solve_affine(A, [F(1)])
    assert x is None
    assert len(ker) == 2


def test_solve_underdetermined():
    A = [[F(1), F(2), F(3)]]
    x, ker = solve_affine(A, [F(6)])
    assert x is not None
    assert mat_vec(A, x) == [F(6)]
    assert len(ker) == 2
    for v in ker:
        assert mat_vec(A, v) == [F(0)]


def test_gaussian_kernel():
    # kernel of [1  i] is spanned by (-i, 1)
    A = [[Gaussian(1), I]]
    ker = kernel_basis(A)
    assert len(ker) == 1
    v = ker[0]
    assert vec_is_zero(mat_vec(A, v))
    # canonicalized: pivot coordinate is 1
    assert v[0] == Gaussian(1)
    assert v[1] == I  # (1, i) is the echelon scaling of (-i, 1)


def test_subspace_ops_dimensions():
    U = [[F(1), F(0), F(0)], [F(0), F(1), F(0)]]
    V = [[F(0), F(1), F(1)]]
    out = subspace_ops(U, V, 3)
    assert len(out["sum"]) == 3
    assert len(out["intersection"]) == 0
    assert out["quotient_dim"] == 3
    assert out["complement"] == []

    W = [[F(1), F(1), F(0)]]
    out2 = subspace_ops(U, W, 3)
    assert len(out2["sum"]) == 2
    assert len(out2["intersection"]) == 1
    assert out2["quotient_dim"] == 1
    assert len(out2["complement"]) == 1
    assert out2["complement"][0] == [F(0), F(0), F(1)]


def test_conjugate_fixed_real_line():
    # span of (1, 0) is already real: fixed part is the rational line
    W = [[Gaussian(1), Gaussian(0)]]
    fixed = conjugate_fixed(W)
    assert fixed == [[F(1), F(0)]]


def test_conjugate_fixed_isotropic_line_is_zero():
    # span of (1, i) meets its conjugate span (1, -i) only at 0
    W = [[Gaussian(1), I]]
    assert conjugate_fixed(W) == []


def test_conjugate_fixed_complex_plane():
    # the full plane is conjugation stable; fixed rational part is everything
    W = [[Gaussian(1), Gaussian(0)], [Gaussian(0), Gaussian(1)]]
    fixed = conjugate_fixed(W)
    assert len(fixed) == 2


def test_complement_is_complement():
    U = [[F(1), F(2), F(3)], [F(0), F(1), F(1)]]
    C = complement_basis(U, 3)
    total = span_echelon(span_echelon(U) + C)
    assert len(total) == 3


def test_filtered_space_nesting():
    W0 = [[F(1), F(0)]]
    W1 = [[F(1), F(0)], [F(0), F(1)]]
    fs = FilteredSpace(2, [W0, W1], ascending=True)
    assert fs.dims() == [1, 2]
    with pytest.raises(AssertionError):
        FilteredSpace(2, [W1, W0], ascending=True)


small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def vectors(n):
    return st.lists(small_fracs, min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.tuples(
            st.lists(vectors(n), min_size=m, max_size=m),
            vectors(m), st.just(n)))))
def test_solve_affine_exact(data):
    A, b, n = data
    x, ker = solve_affine(A, b)
    if x is not None:
        assert mat_vec(A, x) == b
    for v in ker:
        assert vec_is_zero(mat_vec(A, v))
    assert rank(A) + len(ker) == n


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(
    lambda n: st.tuples(
        st.lists(vectors(n), min_size=0, max_size=3),
        st.lists(vectors(n), min_size=0, max_size=3))))
def test_dimension_formula(data):
    U, V = data
    s = subspace_sum(U, V)
    i = subspace_intersect(U, V)
    assert len(span_echelon(U)) + len(span_echelon(V)) == len(s) + len(i)
    for v in i:
        assert in_span(U, v) and in_span(V, v)


@settings(max_examples=40, deadline=None)
@given(st.lists(vectors(3), min_size=1, max_size=3), vectors(3))
def test_coords_reconstruct(basis, v):
    eb = span_echelon(basis)
    if not in_span(eb, v):
        return
    coords = coords_in_basis(eb, v)
    assert coords is not None
    acc = [F(0)] * 3
    for c, b in zip(coords, eb):
        acc = vec_add(acc, vec_scale(c, b))
    assert acc == list(v)
