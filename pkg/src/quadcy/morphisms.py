"""Graded automorphisms and degree-preserving homomorphisms ``A -> M_2(A)``.

Row convention everywhere: ``theta(e_i) = sum_j C[i, j] e_j`` and
``sigma_jk(e_i) = sum_l S_jk[i, l] e_l``. The matrix of a composite
``f o g`` is therefore ``G @ F``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import InconsistentDual, NotAutomorphism, NotHomomorphism, NotInvertible, ZeroP
from .frobenius import frobenius_of_dual
from .linalg import Matrix, block_matrix
from .quadratic import QuadraticPresentation

Blocks = Tuple[Tuple[Matrix, Matrix], Tuple[Matrix, Matrix]]


@dataclass(frozen=True)
class GradedAut:
    """A graded automorphism given by its action on generators."""

    matrix: Matrix

    @property
    def n(self) -> int:
        return self.matrix.rows

    def after(self, other: "GradedAut") -> "GradedAut":
        """``self o other``."""
        return GradedAut(other.matrix @ self.matrix)

    def inverse(self) -> "GradedAut":
        return GradedAut(self.matrix.inverse())

    def power(self, k: int) -> "GradedAut":
        return GradedAut(self.matrix ** k)


def compose(*maps: Matrix) -> Matrix:
    """Matrix of ``maps[0] o maps[1] o ... o maps[-1]``."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = out @ m
    return out


def check_automorphism(A: QuadraticPresentation, theta) -> GradedAut:
    C = theta if isinstance(theta, Matrix) else Matrix(theta, A.field)
    if C.shape != (A.n, A.n):
        raise NotAutomorphism(f"expected a {A.n}x{A.n} matrix, got {C.rows}x{C.cols}")
    if C.rank() != A.n:
        raise NotAutomorphism("matrix is singular")
    bad = A.failing_relation(C)
    if bad is not None:
        raise NotAutomorphism(
            "map does not preserve the relation space", relation=A.relation_strings()[bad]
        )
    return GradedAut(C)


def dual_aut(theta: GradedAut) -> GradedAut:
    """``theta^*`` on ``A^!``: ``theta^*(e_i^*) = sum_j c_ji e_j^*``."""
    return GradedAut(theta.matrix.T)


@dataclass(frozen=True)
class SigmaHom:
    """``sigma: A -> M_2(A)`` of trimmed type with the double-Ore scalars ``p, q``."""

    p: object
    q: object
    blocks: Blocks

    def block(self, j: int, k: int) -> Matrix:
        """``S_jk`` with 1-based indices as in ``sigma_jk``."""
        return self.blocks[j - 1][k - 1]

    @property
    def n(self) -> int:
        return self.blocks[0][0].rows

    def big(self) -> Matrix:
        return block_matrix(self.blocks)


@dataclass(frozen=True)
class SigmaInverse:
    """The inverse ``phi`` of ``sigma``: four ``n x n`` blocks ``Phi_jk``."""

    blocks: Blocks

    def block(self, j: int, k: int) -> Matrix:
        return self.blocks[j - 1][k - 1]


def _as_blocks(S: Sequence[Sequence], field) -> Blocks:
    if len(S) == 4:
        S = [[S[0], S[1]], [S[2], S[3]]]
    out = []
    for row in S:
        out.append(tuple(m if isinstance(m, Matrix) else Matrix(m, field) for m in row))
    return (out[0], out[1])


def m2_relation_failure(A: QuadraticPresentation, blocks: Blocks) -> Optional[Tuple[int, int, int]]:
    """First ``(relation, j, k)`` where ``sigma_jk(r)`` leaves ``R``, else ``None``."""
    for j in range(2):
        for k in range(2):
            K = blocks[j][0].kron(blocks[0][k]) + blocks[j][1].kron(blocks[1][k])
            for idx, r in enumerate(A.relations.entries):
                img = K.apply_row(r)
                if not A.relation_contains({t: v for t, v in enumerate(img) if v}):
                    return idx, j + 1, k + 1
    return None


def check_sigma(A: QuadraticPresentation, p, q, S) -> SigmaHom:
    """Validate ``sigma`` as an algebra homomorphism ``A -> M_2(A)``."""
    F = A.field
    p, q = F(p), F(q)
    if not p:
        raise ZeroP("p must be nonzero")
    blocks = _as_blocks(S, F)
    for row in blocks:
        for m in row:
            if m.shape != (A.n, A.n):
                raise NotHomomorphism(f"sigma blocks must be {A.n}x{A.n}")
    bad = m2_relation_failure(A, blocks)
    if bad is not None:
        idx, j, k = bad
        raise NotHomomorphism(
            f"sigma_{j}{k} does not map a relation into R",
            relation=A.relation_strings()[idx],
            entry=[j, k],
        )
    return SigmaHom(p, q, blocks)


def _degree2_maps(A: QuadraticPresentation, blocks: Blocks):
    """``D[j][k]``: matrix of ``sigma_jk`` on ``A_2`` in the standard-word basis."""
    proj = A.projection_matrix(2)
    words = A.component(2).words
    out = []
    for j in range(2):
        line = []
        for k in range(2):
            rows = []
            for a, b in words:
                tensor = None
                for m in range(2):
                    ra = blocks[j][m].row(a)
                    rb = blocks[m][k].row(b)
                    t = tuple(x * y for x in ra for y in rb)
                    tensor = t if tensor is None else tuple(u + v for u, v in zip(tensor, t))
                rows.append(proj.apply_row(tensor) if tensor else ())
            line.append(Matrix(rows, A.field, cols=A.dim(2)))
        out.append(line)
    return out


def inverse_identities_hold(sig: Blocks, phi: Blocks, n: int, field) -> bool:
    """The two defining identities of an inverse pair on degree-1 matrices."""
    eye, zero = Matrix.identity(n, field), Matrix.zeros(n, n, field)
    for i in range(2):
        for j in range(2):
            target = eye if i == j else zero
            left = sig[i][0] @ phi[j][0] + sig[i][1] @ phi[j][1]
            right = phi[0][i] @ sig[0][j] + phi[1][i] @ sig[1][j]
            if left != target or right != target:
                return False
    return True


def invert_sigma(A: QuadraticPresentation, sigma: SigmaHom) -> SigmaInverse:
    """Solve for ``phi`` with ``sum_k phi_jk sigma_ik = d_ij`` and ``sum_k sigma_kj phi_ki = d_ij``.

    On generators both identities say that the block matrix ``[Phi_kj]`` is
    the inverse of ``[S_ik]``. The result is re-verified on ``A_2`` and
    checked to be a homomorphism.
    """
    n = A.n
    F = A.field
    try:
        Psi = sigma.big().inverse()
    except ValueError:
        raise NotInvertible("sigma has no inverse: the block matrix [S_jk] is singular") from None
    blk = lambda r, c: Psi.block(r * n, (r + 1) * n, c * n, (c + 1) * n)  # noqa: E731
    phi_blocks: Blocks = ((blk(0, 0), blk(1, 0)), (blk(0, 1), blk(1, 1)))
    if not inverse_identities_hold(sigma.blocks, phi_blocks, n, F):
        raise NotInvertible("inverse identities fail on generators")
    if m2_relation_failure(A, phi_blocks) is not None:
        raise NotInvertible("the solved inverse is not an algebra homomorphism")
    if n:
        Ds = _degree2_maps(A, sigma.blocks)
        Dp = _degree2_maps(A, phi_blocks)
        d2 = A.dim(2)
        eye, zero = Matrix.identity(d2, F), Matrix.zeros(d2, d2, F)
        for i in range(2):
            for j in range(2):
                target = eye if i == j else zero
                left = Ds[i][0] @ Dp[j][0] + Ds[i][1] @ Dp[j][1]
                right = Dp[0][i] @ Ds[0][j] + Dp[1][i] @ Ds[1][j]
                if left != target or right != target:
                    raise NotInvertible(f"inverse identities fail on A_2 at (i, j) = ({i + 1}, {j + 1})")
    return SigmaInverse(phi_blocks)


def det_r(A: QuadraticPresentation, sigma: SigmaHom) -> GradedAut:
    """``-q s12 s11 + s22 s11 - p s12 s21`` (composites), validated as an automorphism."""
    S = sigma.block
    M = (S(1, 1) @ S(1, 2)).scale(-sigma.q) + S(1, 1) @ S(2, 2) + (S(2, 1) @ S(1, 2)).scale(-sigma.p)
    return check_automorphism(A, M)


def det_l(sigma: SigmaHom, phi: SigmaInverse) -> GradedAut:
    """``-q phi11 phi21 + phi11 phi22 - p phi12 phi21`` (composites)."""
    P = phi.block
    M = (P(2, 1) @ P(1, 1)).scale(-sigma.q) + P(2, 2) @ P(1, 1) + (P(2, 1) @ P(1, 2)).scale(-sigma.p)
    return GradedAut(M)


def transpose_blocks(blocks: Blocks) -> Blocks:
    return tuple(tuple(m.T for m in row) for row in blocks)


@dataclass(frozen=True)
class WXYZ:
    W: object
    X: object
    Y: object
    Z: object

    def matrix(self, field) -> Matrix:
        return Matrix([[self.W, self.X], [self.Y, self.Z]], field)


def star_on_top(A: QuadraticPresentation, blocks: Blocks) -> WXYZ:
    """Scalars of ``sigma^*(delta)`` where ``sigma^*`` has the transposed blocks.

    ``sigma^*`` is extended multiplicatively, ``sigma^*(xy) = sigma^*(x) sigma^*(y)``
    in ``M_2(A^!)``, and evaluated on the top basis word of ``A^!``.
    """
    Fr = frobenius_of_dual(A)
    E = Fr.algebra
    star = transpose_blocks(blocks)
    if m2_relation_failure(E, star) is not None:
        raise InconsistentDual("sigma^* does not preserve the dual relations")
    one = E.field.one
    cur = [[{0: one}, {}], [{}, {0: one}]]
    word = E.component(Fr.top_degree).words[0]
    for t, letter in enumerate(word):
        new = [[{}, {}], [{}, {}]]
        for j in range(2):
            for k in range(2):
                acc = {}
                for m in range(2):
                    if not cur[j][m]:
                        continue
                    part = E._times_linear(cur[j][m], t, star[m][k].row(letter))
                    for key, v in part.items():
                        nv = acc.get(key, 0) + v
                        if nv:
                            acc[key] = nv
                        else:
                            acc.pop(key, None)
                new[j][k] = acc
        cur = new
    vals = []
    for j in range(2):
        for k in range(2):
            entry = cur[j][k]
            if any(key != 0 for key in entry):
                raise InconsistentDual("sigma^*(delta) has a component outside k.delta")
            vals.append(entry.get(0, E.field.zero))
    return WXYZ(*vals)


def wxyz(A: QuadraticPresentation, sigma: SigmaHom) -> WXYZ:
    return star_on_top(A, sigma.blocks)


def wxyz_inverse(A: QuadraticPresentation, phi: SigmaInverse) -> WXYZ:
    """The primed scalars from ``phi^*(delta)``."""
    return star_on_top(A, phi.blocks)


def diagonal_sigma(A: QuadraticPresentation, p, tau, xi, q=0) -> SigmaHom:
    """``sigma = diag(tau, xi)``."""
    F = A.field
    t = tau.matrix if isinstance(tau, GradedAut) else Matrix(tau, F) if not isinstance(tau, Matrix) else tau
    x = xi.matrix if isinstance(xi, GradedAut) else Matrix(xi, F) if not isinstance(xi, Matrix) else xi
    z = Matrix.zeros(A.n, A.n, F)
    return check_sigma(A, p, q, [[t, z], [z, x]])
