from fractions import Fraction

import pytest

import quadcy.extensions as ext
from algebras import (
    I2,
    Z2,
    jordan_aut,
    jordan_diagonal_cy,
    jordan_plane,
    laurent_theta,
    polynomial_ring,
    quantum_diagonal,
    quantum_plane,
    type_h,
    type_n,
    valid_double_ore_specs,
)
from quadcy.errors import CrossCheckMismatch, NotCommuting, NotKoszulRegular
from quadcy.extensions import (
    DoubleOreSpec,
    IteratedSpec,
    OreExtensionSpec,
    cy_double_ore,
    cy_iterated,
    cy_iterated_laurent,
    cy_laurent_diagonal,
    cy_ore,
    cy_skew_laurent,
    double_ore_extend,
    dual_presentation_double_ore,
    free_module_dims,
    iterated_extend,
    nakayama_double_ore,
    nakayama_iterated,
    nakayama_ore,
    nakayama_skew_laurent,
    ore_extend,
    require_koszul_regular,
)
from quadcy.frobenius import dual_of, frobenius_of_dual, hdet, nakayama_nu
from quadcy.linalg import Matrix, same_row_space
from quadcy.morphisms import det_l, wxyz
from quadcy.quadratic import QuadraticPresentation, koszul_check, presentation_from_polys

NU_J = [[1, 0], [2, 1]]
MINUS = [[-1, 0], [0, -1]]
SPECS = valid_double_ore_specs()


# -- Ore extensions ------------------------------------------------------------


def test_ore_dims_and_relations(jordan):
    D = ore_extend(OreExtensionSpec.build(jordan, NU_J))
    assert D.hilbert(5) == [1, 3, 6, 10, 15, 21]
    assert D.hilbert(5) == free_module_dims(jordan, 1, 5)
    central = ore_extend(OreExtensionSpec.build(jordan, I2))
    assert {"x*t - t*x", "y*t - t*y"} <= set(central.relation_strings())
    assert koszul_check(D, 6).passed


@pytest.mark.parametrize("theta", [NU_J, I2, jordan_aut(3, 5), jordan_aut(-1, Fraction(1, 2))])
def test_ore_dual_relations(jordan, theta):
    D = ore_extend(OreExtensionSpec.build(jordan, theta))
    Dd = dual_of(D)
    Ci = Matrix(theta).inverse()
    N = 3
    assert Dd.relation_contains({2 * N + 2: 1})  # (t*)^2
    for i in range(2):
        vec = {2 * N + i: Fraction(1)}
        for j in range(2):
            if Ci[j, i]:
                vec[j * N + 2] = vec.get(j * N + 2, 0) + Ci[j, i]
        assert Dd.relation_contains(vec)


def test_nakayama_ore_examples(jordan, quantum):
    d = nakayama_ore(OreExtensionSpec.build(jordan, NU_J))
    assert d.is_identity() and d.agrees_with_engine()
    d = nakayama_ore(OreExtensionSpec.build(jordan, I2))
    assert d.on_base == Matrix(NU_J) and d.on_new_generators == Matrix([[1]])
    s = Fraction(3, 2)
    theta = [[s, 0], [0, 1 / s]]
    d = nakayama_ore(OreExtensionSpec.build(quantum, theta))
    assert d.on_base == Matrix(MINUS) @ Matrix(theta).inverse()
    assert d.on_new_generators == Matrix([[1]])
    d = nakayama_ore(OreExtensionSpec.build(jordan, jordan_aut(3, 5)))
    assert d.on_new_generators == Matrix([[9]]) and d.agrees_with_engine()


def test_cy_ore(jordan):
    assert cy_ore(OreExtensionSpec.build(jordan, NU_J)).status == "yes"
    for theta in (I2, jordan_aut(1, 1), jordan_aut(-1, 2)):
        v = cy_ore(OreExtensionSpec.build(jordan, theta))
        assert v.status == "no" and v.reasons == ["theta != nu"]
    assert cy_ore(OreExtensionSpec.build(polynomial_ring(2), I2)).status == "yes"


# -- double Ore extensions -------------------------------------------------------


def test_double_ore_dims():
    B = double_ore_extend(jordan_diagonal_cy())
    assert B.hilbert(4) == [1, 4, 10, 20, 35]
    assert koszul_check(double_ore_extend(type_n(0, 1)), 6).passed


@pytest.mark.parametrize("spec", SPECS)
def test_double_ore_hilbert_identities(spec):
    B = double_ore_extend(spec)
    assert B.hilbert(5) == free_module_dims(spec.base, 2, 5)
    assert koszul_check(B, 5).passed
    a = dual_of(spec.base).hilbert(6)
    b = dual_of(B).hilbert(6)
    for m in range(7):
        assert b[m] == a[m] + 2 * (a[m - 1] if m >= 1 else 0) + (a[m - 2] if m >= 2 else 0)


@pytest.mark.parametrize("spec", SPECS)
def test_written_dual_matches(spec):
    Bd = dual_presentation_double_ore(spec)
    assert same_row_space(Bd.relations, dual_of(double_ore_extend(spec)).relations)


def test_written_dual_trivial_base():
    k = QuadraticPresentation([], [])
    p, q = Fraction(2), Fraction(3)
    spec = DoubleOreSpec.build(k, p, q, [[[]] * 0] * 4)
    Bd = dual_presentation_double_ore(spec)
    expected = presentation_from_polys(
        ["y1*", "y2*"], [{(0, 0): 1, (1, 0): q}, {(0, 1): 1, (1, 0): p}, {(1, 1): 1}]
    )
    assert Bd == expected


def test_nakayama_double_ore_examples():
    assert nakayama_double_ore(jordan_diagonal_cy()).is_identity()
    d = nakayama_double_ore(type_n(0, 1))
    assert d.is_identity()
    assert (d.extra["W"], d.extra["X"], d.extra["Y"], d.extra["Z"]) == (-1, 0, 0, -1)


@pytest.mark.parametrize("p", [1, 2, Fraction(-1, 3)])
def test_diagonal_formula(p):
    A = jordan_plane()
    tau, xi = jordan_aut(2, 1), jordan_aut(-3, 1)
    spec = DoubleOreSpec.build(A, p, 0, [tau, Z2, Z2, xi])
    d = nakayama_double_ore(spec)
    F = A.field
    assert d.on_new_generators == Matrix.diagonal([hdet(A, Matrix(tau)) / F(p), F(p) * hdet(A, Matrix(xi))])


@pytest.mark.parametrize("spec", SPECS)
def test_closed_form_matches_engine(spec):
    d = nakayama_double_ore(spec)
    assert d.engine == nakayama_nu(double_ore_extend(spec)).nu
    assert d.agrees_with_engine()


@pytest.mark.parametrize("spec", SPECS)
def test_dual_nakayama_structure(spec):
    A, n = spec.base, spec.base.n
    B = double_ore_extend(spec)
    MB = nakayama_nu(B).mu
    MA = nakayama_nu(A).mu
    Dl = det_l(spec.sigma, spec.inverse()).matrix
    # mu of B^! on the A^! generators is mu_{A^!} o (det_l phi)^*
    assert MB.block(0, n, 0, n) == Dl.T @ MA
    assert MB.block(0, n, n, n + 2).is_zero()
    # mu of B^! on y2*
    w = wxyz(A, spec.sigma)
    sign = 1 if nakayama_nu(A).top_degree % 2 else -1
    assert MB.row(n + 1) == (0,) * n + (sign * spec.p * w.X, sign * spec.p * w.Z)


@pytest.mark.parametrize("spec", SPECS)
def test_top_products_in_dual(spec):
    A, n = spec.base, spec.base.n
    E = frobenius_of_dual(double_ore_extend(spec)).algebra
    FA = frobenius_of_dual(A)
    delta = E.reduce_word(FA.algebra.component(FA.top_degree).words[0])
    y1, y2 = E.generator(n), E.generator(n + 1)
    eps = E.product(delta, y1, y2)
    assert E.dim(eps.degree) == 1 and not eps.is_zero()
    assert E.dim(eps.degree + 1) == 0
    assert E.product(delta, y2, y2).is_zero()
    assert E.product(delta, y2, y1) == eps.scale(-1 / spec.p)
    assert E.product(delta, y1, y1) == eps.scale(spec.q / spec.p)


def test_cy_double_ore_examples():
    assert cy_double_ore(jordan_diagonal_cy()).status == "yes"
    assert cy_double_ore(type_n(0, 1)).status == "yes"
    v = cy_double_ore(type_n(2, 1))
    assert v.status == "no"
    assert "det_r sigma = nu: fails" in v.reasons


def test_type_h_adjudicated_by_engine():
    spec = type_h(1, 1)
    v = cy_double_ore(spec)
    d = nakayama_double_ore(spec)
    assert not d.engine.is_identity()
    assert v.status == "no"
    assert v.diagnostics["conditions"]["det_r sigma = nu"]
    assert not v.diagnostics["conditions"]["W = p"]
    assert (v.diagnostics["W"], v.diagnostics["Z"]) == (1, 1)


def test_mismatch_is_reported(monkeypatch):
    from quadcy.morphisms import WXYZ

    monkeypatch.setattr(ext, "double_ore_scalars", lambda spec: WXYZ(2, 0, 0, 2))
    with pytest.raises(CrossCheckMismatch) as exc:
        nakayama_double_ore(type_n(0, 1))
    assert "closed_form" in exc.value.details and "engine" in exc.value.details


def test_non_koszul_base_rejected():
    A = presentation_from_polys(["x", "y"], [{(0, 0): 1, (1, 0): 1}, {(1, 1): 1}])
    with pytest.raises(NotKoszulRegular):
        require_koszul_regular(A)


# -- Laurent extensions ----------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 5])
def test_laurent_plus(jordan, n):
    v = cy_skew_laurent(jordan, laurent_theta(1, n))
    assert v.status == "yes" and v.witness == (n,)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_laurent_minus_even(jordan, n):
    v = cy_skew_laurent(jordan, laurent_theta(-1, n))
    assert v.status == "yes"
    assert v.witness == (-n,)
    C = Matrix(laurent_theta(-1, n))
    assert C ** v.witness[0] == Matrix(NU_J)


@pytest.mark.parametrize("n", [1, 3, 5, 7])
def test_laurent_minus_odd(jordan, n):
    v = cy_skew_laurent(jordan, laurent_theta(-1, n))
    assert v.status == "no"


@pytest.mark.parametrize("bound", [0, 1, 20])
def test_laurent_hdet_forces_no(jordan, bound):
    v = cy_skew_laurent(jordan, jordan_aut(2, 0), bound)
    assert v.status == "no" and "hdet" in v.reasons[0]


def test_laurent_beyond_bound(jordan):
    v = cy_skew_laurent(jordan, laurent_theta(1, 45), bound=20)
    assert v.status == "yes" and v.witness == (45,)


def test_nakayama_skew_laurent(jordan):
    d = nakayama_skew_laurent(jordan, NU_J)
    assert d.extra["t"] == 1 and d.extra["t_inverse"] == 1
    for a in (2, Fraction(-1, 3)):
        d = nakayama_skew_laurent(jordan, jordan_aut(a, 1))
        assert d.extra["t"] == Fraction(a) ** 2
        assert d.extra["t"] * d.extra["t_inverse"] == 1


def test_laurent_diagonal(quantum, jordan):
    v = cy_laurent_diagonal(quantum, 1, MINUS, I2)
    assert v.status == "yes"
    T, X = Matrix(MINUS), Matrix(I2)
    n, m = v.witness
    assert (T ** n) @ (X ** m) == Matrix(MINUS)
    v = cy_laurent_diagonal(quantum, 1, [[2, 0], [0, 1]], I2)
    assert v.status == "no"
    v = cy_laurent_diagonal(jordan, 1, NU_J, I2)
    assert v.status == "yes" and v.witness == (1, 0)


def test_laurent_diagonal_with_p(quantum):
    # p = 2: hdet(xi) = 1/2 pins n = 1 and hdet(tau) = 2 pins m = 1; tau xi = -id = nu
    tau = [[-2, 0], [0, -1]]
    xi = [[Fraction(1, 2), 0], [0, 1]]
    v = cy_laurent_diagonal(quantum, 2, tau, xi)
    assert any("p != 1" in r for r in v.reasons)
    assert v.diagnostics["n_constraint"] == "k = 1"
    assert v.diagnostics["m_constraint"] == "k = 1"
    assert v.status == "yes" and v.witness == (1, 1)
    # hdet(tau) = -2 is never a power of 2
    v = cy_laurent_diagonal(quantum, 2, [[-2, 0], [0, 1]], xi)
    assert v.diagnostics["m_constraint"] == "none"
    assert v.status == "no"


def test_laurent_diagonal_noncommuting():
    A = polynomial_ring(2)
    with pytest.raises(NotCommuting):
        cy_laurent_diagonal(A, 1, [[1, 1], [0, 1]], [[1, 0], [1, 1]])


# -- iterated extensions -----------------------------------------------------------


def test_iterated_presentations(jordan, quantum):
    one = iterated_extend(IteratedSpec.build(jordan, [NU_J], ["t"]))
    assert one == ore_extend(OreExtensionSpec.build(jordan, NU_J))
    kx = presentation_from_polys(["x"], [])
    R = iterated_extend(IteratedSpec.build(kx, [[[1]], [[1]]]))
    assert R.hilbert(5) == [1, 3, 6, 10, 15, 21]
    R = iterated_extend(IteratedSpec.build(quantum, [MINUS, I2]))
    assert R.hilbert(3) == [1, 4, 10, 20]
    with pytest.raises(NotCommuting) as exc:
        IteratedSpec.build(polynomial_ring(2), [[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
    assert exc.value.details["pair"] == [1, 2]


def test_nakayama_iterated_agrees(jordan, quantum):
    d1 = nakayama_iterated(IteratedSpec.build(jordan, [jordan_aut(3, 5)], ["t"]))
    d0 = nakayama_ore(OreExtensionSpec.build(jordan, jordan_aut(3, 5)))
    assert d1.full() == d0.full()
    for base, a, b in ((quantum, MINUS, I2), (jordan, NU_J, jordan_aut(2, 1))):
        it = IteratedSpec.build(base, [a, b])
        dd = DoubleOreSpec.build(base, 1, 0, [a, Z2, Z2, b])
        assert iterated_extend(it) == double_ore_extend(dd)
        assert nakayama_iterated(it).full() == nakayama_double_ore(dd).full()
    d = nakayama_iterated(IteratedSpec.build(quantum, [MINUS, I2]))
    assert d.is_identity()
    d = nakayama_iterated(IteratedSpec.build(jordan, [I2, I2]))
    assert d.on_base == Matrix(NU_J) and d.on_new_generators.is_identity()


def test_cy_iterated(jordan, quantum):
    assert cy_iterated(IteratedSpec.build(quantum, [MINUS, I2])).status == "yes"
    assert cy_iterated(IteratedSpec.build(jordan, [NU_J])).status == "yes"
    assert cy_iterated(IteratedSpec.build(jordan, [I2, I2])).status == "no"


def test_cy_iterated_laurent(jordan, quantum):
    v = cy_iterated_laurent(IteratedSpec.build(quantum, [MINUS]))
    assert v.status == "yes" and v.witness == (-1,)
    v = cy_iterated_laurent(IteratedSpec.build(jordan, [laurent_theta(1, 7)]))
    assert v.witness == (7,)
    v = cy_iterated_laurent(IteratedSpec.build(jordan, [jordan_aut(2, 0)]))
    assert v.status == "no"
    v = cy_iterated_laurent(IteratedSpec.build(jordan, [laurent_theta(1, 2), laurent_theta(1, 3)]))
    assert v.status == "yes"
    k1, k2 = v.witness
    assert (Matrix(laurent_theta(1, 2)) ** k1) @ (Matrix(laurent_theta(1, 3)) ** k2) == Matrix(NU_J)
