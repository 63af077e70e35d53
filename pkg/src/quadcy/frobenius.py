"""Frobenius structure of finite-dimensional duals, Nakayama maps, hdet.

The pairing on a graded Frobenius algebra ``E`` with top degree ``d`` is
``<a, b>`` = coefficient of ``ab`` on the chosen top basis vector ``delta``.
All matrices of maps use the row convention of the rest of the package:
row ``i`` holds the image of generator ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Tuple

from .errors import InconsistentDual, NotAutomorphism, NotFrobenius
from .linalg import Matrix
from .quadratic import GradedElement, QuadraticPresentation, quadratic_dual


@dataclass
class FrobeniusData:
    algebra: QuadraticPresentation
    top_degree: int
    delta: GradedElement
    eta: Tuple[GradedElement, ...]
    lam: Matrix
    pairing_tables: Dict[int, Matrix] = field(repr=False)
    delta_scale: object = 1

    def pair(self, a: GradedElement, b: GradedElement):
        """``<a, b>``; zero unless the degrees add up to the top degree."""
        if a.degree + b.degree != self.top_degree:
            return self.algebra.field.zero
        return self.algebra.multiply(a, b).coords[0] / self.delta_scale


def frobenius_structure(E: QuadraticPresentation, delta_scale=1) -> FrobeniusData:
    """Detect a graded Frobenius structure on the finite-dimensional algebra ``E``.

    ``delta`` is ``delta_scale`` times the first selected monomial of the top
    component. Raises :class:`NotFrobenius` if the algebra does not terminate
    below degree ``2n + 4``, the top component is not one-dimensional, or some
    pairing ``E_k x E_{d-k}`` is degenerate.
    """
    F = E.field
    scale = F(delta_scale)
    if not scale:
        raise ValueError("delta_scale must be nonzero")
    hard = 2 * E.n + 4
    d = None
    for k in range(hard + 1):
        if E.dim(k) == 0:
            d = k - 1
            break
    if d is None:
        raise NotFrobenius(
            f"algebra does not terminate below degree {hard}", reason="does not terminate below hard bound"
        )
    if E.dim(d) != 1:
        raise NotFrobenius(
            f"top component in degree {d} has dimension {E.dim(d)}", reason="top-dim != 1", degree=d
        )
    tables: Dict[int, Matrix] = {}
    for k in range(d + 1):
        left = [E.basis_element(k, i) for i in range(E.dim(k))]
        right = [E.basis_element(d - k, j) for j in range(E.dim(d - k))]
        rows = [[E.multiply(a, b).coords[0] / scale for b in right] for a in left]
        P = Matrix(rows, F, cols=len(right))
        if P.rows != P.cols or P.rank() != P.rows:
            raise NotFrobenius(f"pairing in degree {k} is degenerate", reason="degenerate pairing", degree=k)
        tables[k] = P
    delta = E.basis_element(d, 0).scale(scale)
    n = E.n
    if n == 0:
        return FrobeniusData(E, d, delta, (), Matrix.zeros(0, 0, F), tables, scale)
    H = tables[1].inverse()
    eta = tuple(GradedElement(d - 1, H.column(j)) for j in range(n))
    lam = H.T @ tables[d - 1]
    return FrobeniusData(E, d, delta, eta, lam, tables, scale)


def nakayama_mu(F: FrobeniusData) -> Matrix:
    """Nakayama automorphism of ``E`` on degree 1, from ``<a,b> = <mu(b), a>``.

    Equals the transpose of ``lam``. The result is checked to preserve the
    relations of ``E`` so that it extends to an algebra automorphism.
    """
    E = F.algebra
    if E.n == 0:
        return Matrix.zeros(0, 0, E.field)
    d = F.top_degree
    M = F.pairing_tables[d - 1].T @ F.pairing_tables[1].inverse()
    bad = E.failing_relation(M)
    if bad is not None:
        raise InconsistentDual("Nakayama map does not preserve the dual relations", relation=bad)
    return M


def check_nakayama_identity(F: FrobeniusData, mu: Matrix) -> bool:
    """Verify ``<a, b> = <mu(b), a>`` on every pair of basis elements."""
    E = F.algebra
    d = F.top_degree
    for k in range(d + 1):
        mu_k = E.map_on_component(mu, k)
        for i in range(E.dim(k)):
            b = E.basis_element(k, i)
            mb = GradedElement(k, mu_k.row(i))
            for j in range(E.dim(d - k)):
                a = E.basis_element(d - k, j)
                if F.pair(a, b) != F.pair(mb, a):
                    return False
    return True


@dataclass
class NakayamaResult:
    mu_on_degree1: Matrix
    nu_on_generators: Matrix
    top_degree: int
    frobenius: FrobeniusData = field(repr=False)

    @property
    def nu(self) -> Matrix:
        return self.nu_on_generators

    @property
    def mu(self) -> Matrix:
        return self.mu_on_degree1


@lru_cache(maxsize=256)
def dual_of(A: QuadraticPresentation) -> QuadraticPresentation:
    """Cached quadratic dual, so its component cache is shared."""
    return quadratic_dual(A)


@lru_cache(maxsize=256)
def _frobenius_cached(E: QuadraticPresentation) -> FrobeniusData:
    return frobenius_structure(E)


def frobenius_of_dual(A: QuadraticPresentation) -> FrobeniusData:
    return _frobenius_cached(dual_of(A))


def nu_from_mu(mu: Matrix, top_degree: int) -> Matrix:
    """``nu = eps^{d+1} mu^*`` on generators: sign times the transpose."""
    sign = -1 if top_degree % 2 == 0 else 1
    return mu.T.scale(sign)


def nakayama_nu(A: QuadraticPresentation, frobenius: FrobeniusData = None) -> NakayamaResult:
    """Nakayama automorphism of a Koszul AS-regular ``A`` via its Frobenius dual."""
    F = frobenius if frobenius is not None else frobenius_of_dual(A)
    mu = nakayama_mu(F)
    nu = nu_from_mu(mu, F.top_degree)
    bad = A.failing_relation(nu)
    if bad is not None:
        raise InconsistentDual("computed Nakayama map does not preserve R", relation=bad)
    return NakayamaResult(mu, nu, F.top_degree, F)


def _as_matrix(theta, field) -> Matrix:
    if hasattr(theta, "matrix"):
        return theta.matrix
    return theta if isinstance(theta, Matrix) else Matrix(theta, field)


def hdet(A: QuadraticPresentation, theta) -> object:
    """Homological determinant: the scalar by which ``theta^*`` acts on the top of ``A^!``.

    ``theta^*`` has the transposed matrix and is extended multiplicatively.
    """
    C = _as_matrix(theta, A.field)
    if C.shape != (A.n, A.n):
        raise NotAutomorphism(f"expected a {A.n}x{A.n} matrix, got {C.rows}x{C.cols}")
    bad = A.failing_relation(C)
    if bad is not None:
        raise NotAutomorphism("map does not preserve the relations", relation=A.relation_strings()[bad])
    F = frobenius_of_dual(A)
    E = F.algebra
    top_word = E.component(F.top_degree).words[0]
    value = E.image_of_word(C.T, top_word).coords[0]
    if not value:
        raise NotAutomorphism("map is not invertible (hdet vanishes)")
    return value

