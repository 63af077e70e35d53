from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from quadcy.exponents import (
    ExponentSet,
    determinant,
    finite_order,
    is_unipotent,
    quasi_unipotent_period,
    rational_log,
    solve_exponents,
    unipotent_log,
)
from quadcy.fields import QQ, PrimeField
from quadcy.linalg import Matrix

ROT = Matrix([[0, -1], [1, 0]])  # order 4
J = Matrix([[1, 0], [1, 1]])


def test_rational_log():
    assert rational_log(2, 8, QQ) == ExponentSet.fixed(3)
    assert rational_log(Fraction(1, 2), 8, QQ) == ExponentSet.fixed(-3)
    assert rational_log(2, 6, QQ).kind == "none"
    assert rational_log(1, 1, QQ).kind == "all"
    assert rational_log(1, 2, QQ).kind == "none"
    assert rational_log(-1, -1, QQ) == ExponentSet.residue(1, 2)
    assert rational_log(-1, 3, QQ).kind == "none"
    F = PrimeField(7)
    s = rational_log(3, 2, F)  # 3 has order 6 mod 7 and 3^2 = 2
    assert s == ExponentSet.residue(2, 6)


@given(st.fractions(min_value=-9, max_value=9, max_denominator=9).filter(lambda x: x not in (0, 1, -1)),
       st.integers(-12, 12))
def test_rational_log_recovers_exponent(base, m):
    assert rational_log(base, base ** m, QQ) == ExponentSet.fixed(m)


def test_orders_and_unipotents():
    assert finite_order(ROT, 10) == 4
    assert finite_order(J, 10) is None
    assert quasi_unipotent_period(ROT) == 4
    assert quasi_unipotent_period(-J) == 2
    assert quasi_unipotent_period(Matrix([[2, 0], [0, 1]])) is None
    assert is_unipotent(J) and not is_unipotent(ROT)
    assert determinant(Matrix([[2, 1], [4, 5]])) == 6


@given(st.fractions(min_value=-5, max_value=5, max_denominator=5), st.integers(-6, 6))
def test_log_of_powers_is_linear(b, k):
    U = Matrix([[1, 0, 0], [b, 1, 0], [1, b, 1]])
    assert unipotent_log(U ** k) == unipotent_log(U).scale(k)


def test_bounded_and_exact_search():
    target = J ** 7
    r = solve_exponents([J], target, bound=20)
    assert r.witness == (7,) and r.method == "bounded search"
    far = solve_exponents([J], J ** 45, bound=20)
    assert far.witness == (45,) and far.method == "unipotent logarithm"
    none = solve_exponents([J], Matrix([[1, 0], [Fraction(1, 2), 1]]), bound=20)
    assert none.witness is None and none.complete


def test_finite_order_is_exhaustive():
    r = solve_exponents([ROT], ROT ** 3, bound=20)
    assert r.witness == (-1,)
    r = solve_exponents([ROT], -Matrix.identity(2), bound=0)
    assert r.witness == (-2,) and r.complete
    r = solve_exponents([ROT], Matrix([[0, 1], [1, 0]]), bound=20)
    assert r.witness is None and r.complete


def test_witness_order_is_abs_then_lex():
    minus = -Matrix.identity(2)
    r = solve_exponents([minus, Matrix.identity(2)], minus, bound=3)
    assert r.witness == (-1, 0)


def test_constraints():
    minus_j = -J
    # (-J)^k = (-1)^k J^k: J^4 is reached only at k=4
    r = solve_exponents([minus_j], J ** 4, [ExponentSet.residue(1, 2)], bound=20)
    assert r.witness is None and r.complete
    r = solve_exponents([minus_j], J ** 4, [ExponentSet.all()], bound=20)
    assert r.witness == (4,)
    r = solve_exponents([J, ROT], (J ** 3) @ ROT, [ExponentSet.fixed(3), ExponentSet.all()], bound=20)
    assert r.witness == (3, 1)
    assert solve_exponents([J], J, [ExponentSet.none()]).complete


def test_two_infinite_generators():
    A, B = J, J ** 2
    r = solve_exponents([A, B], J ** 101, bound=5)
    assert r.witness is None and not r.complete  # dependent logarithms
    D = Matrix([[2, 0], [0, 1]])
    r = solve_exponents([D], D ** 30, bound=5)
    assert r.witness == (30,) and r.method == "determinant"


def test_prime_field_bounded():
    F = PrimeField(5)
    C = Matrix([[2, 0], [0, 3]], F)
    r = solve_exponents([C], C ** 3, bound=2)
    assert r.witness == (-1,) and r.complete
