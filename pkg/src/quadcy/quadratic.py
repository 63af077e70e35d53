"""Finitely presented quadratic algebras ``T(V)/<R>``.

Words are tuples of generator indices. Degree-``k`` words are ordered
lexicographically with the first letter most significant, so the tensor
coordinate of ``(i, j)`` is ``i * n + j``.

Graded components are built one degree at a time::

    A_k = (A_{k-1} (x) V) / span{ w . r : w a basis word of A_{k-2}, r in R }

and the quotient basis is the set of non-pivot columns of that system.
Because lexicographic order on equal-length words is compatible with
multiplication, these are exactly the standard monomials of the full
ideal component ``sum V^i (x) R (x) V^j``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import QQ
from .linalg import Matrix, in_row_space, null_space, rref_sparse

Word = Tuple[int, ...]
SparseVec = Dict[int, object]

DEFAULT_DEGREE_BOUND = 6


def word_index(word: Word, n: int) -> int:
    idx = 0
    for letter in word:
        idx = idx * n + letter
    return idx


def index_word(idx: int, n: int, degree: int) -> Word:
    out = []
    for _ in range(degree):
        idx, r = divmod(idx, n)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class GradedElement:
    """A homogeneous element: degree plus coordinates in the component basis."""

    degree: int
    coords: Tuple

    def __add__(self, other: "GradedElement") -> "GradedElement":
        if self.degree != other.degree:
            raise ValueError("adding elements of different degrees")
        return GradedElement(self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.degree, tuple(-a for a in self.coords))

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def scale(self, c) -> "GradedElement":
        return GradedElement(self.degree, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


class ComponentBasis:
    """Basis data for one graded component.

    ``words`` are the selected standard monomials; ``right[b][i]`` holds the
    coordinates (sparse) of ``basis_{k-1}[b] * e_i`` in this component.
    """

    def __init__(self, degree: int, words: Sequence[Word], right: List[List[SparseVec]]):
        self.degree = degree
        self.words = tuple(words)
        self.index = {w: i for i, w in enumerate(self.words)}
        self.right = right

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def selected_monomials(self) -> Tuple[Word, ...]:
        return self.words

    def __repr__(self):
        return f"ComponentBasis(degree={self.degree}, dim={self.dim})"


class QuadraticPresentation:
    """Generators plus a quadratic relation subspace ``R`` of ``V (x) V``.

    ``relations`` may be any spanning set; it is stored as its RREF row basis.
    Instances behave as values: equality compares generators, field and the
    canonical relation rows. The component cache is guarded by a lock.
    """

    def __init__(self, generator_names: Sequence[str], relations, field=QQ):
        self.generator_names = tuple(generator_names)
        self.field = field
        n = len(self.generator_names)
        if isinstance(relations, Matrix):
            rows = relations.sparse_rows()
            ncols = relations.cols
        else:
            rows = [{j: field(v) for j, v in enumerate(r) if v} for r in relations]
            ncols = n * n
        if ncols != n * n:
            raise ValueError(f"relations need {n * n} columns, got {ncols}")
        red, piv = rref_sparse(rows, n * n)
        self._rel_rows = red
        self._rel_pivots = piv
        self.relations = Matrix.from_sparse(red, n * n, field)
        self._components: List[ComponentBasis] = []
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return len(self.generator_names)

    def __eq__(self, other):
        if not isinstance(other, QuadraticPresentation):
            return NotImplemented
        return (
            self.generator_names == other.generator_names
            and self.field == other.field
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.generator_names, self.relations))

    def __repr__(self):
        return f"QuadraticPresentation(gens={list(self.generator_names)}, relations={self.relations.rows})"

    # -- graded components -------------------------------------------------

    def component(self, k: int) -> ComponentBasis:
        if k < 0:
            raise ValueError("negative degree")
        if k < len(self._components):
            return self._components[k]
        with self._lock:
            while len(self._components) <= k:
                self._components.append(self._build(len(self._components)))
        return self._components[k]

    def _build(self, k: int) -> ComponentBasis:
        n = self.n
        one = self.field.one
        if k == 0:
            return ComponentBasis(0, [()], [])
        if k == 1:
            return ComponentBasis(1, [(i,) for i in range(n)], [[{i: one} for i in range(n)]])
        prev = self._components[k - 1]
        prev2_dim = self._components[k - 2].dim
        ncols = prev.dim * n
        rows = []
        for a in range(prev2_dim):
            lifts = prev.right[a]
            for rel in self._rel_rows:
                img: SparseVec = {}
                for col, c in rel.items():
                    i, j = divmod(col, n)
                    for b, v in lifts[i].items():
                        key = b * n + j
                        nv = img.get(key, 0) + c * v
                        if nv:
                            img[key] = nv
                        else:
                            img.pop(key, None)
                if img:
                    rows.append(img)
        red, piv = rref_sparse(rows, ncols)
        pivset = set(piv)
        free = [c for c in range(ncols) if c not in pivset]
        pos = {c: t for t, c in enumerate(free)}
        words = [prev.words[c // n] + (c % n,) for c in free]
        pivot_row = dict(zip(piv, red))
        right: List[List[SparseVec]] = []
        for b in range(prev.dim):
            line = []
            for j in range(n):
                c = b * n + j
                if c in pos:
                    line.append({pos[c]: one})
                else:
                    line.append({pos[cc]: -v for cc, v in pivot_row[c].items() if cc != c})
            right.append(line)
        return ComponentBasis(k, words, right)

    def dim(self, k: int) -> int:
        return self.component(k).dim

    def hilbert(self, bound: int = DEFAULT_DEGREE_BOUND) -> List[int]:
        """Dimensions of the components in degrees ``0..bound``."""
        if bound < 0:
            raise ValueError("negative degree bound")
        return [self.dim(k) for k in range(bound + 1)]

    # -- elements ----------------------------------------------------------

    def zero(self, k: int) -> GradedElement:
        return GradedElement(k, (self.field.zero,) * self.dim(k))

    def unit(self) -> GradedElement:
        return GradedElement(0, (self.field.one,))

    def basis_element(self, k: int, i: int) -> GradedElement:
        z, o = self.field.zero, self.field.one
        return GradedElement(k, tuple(o if t == i else z for t in range(self.dim(k))))

    def generator(self, i: int) -> GradedElement:
        return self.basis_element(1, i)

    def linear(self, coeffs: Sequence) -> GradedElement:
        """Degree-1 element ``sum coeffs[i] e_i``."""
        if len(coeffs) != self.n:
            raise ValueError("wrong number of coefficients")
        return GradedElement(1, tuple(self.field(c) for c in coeffs))

    def _to_dense(self, k: int, vec: SparseVec) -> GradedElement:
        z = self.field.zero
        out = [z] * self.dim(k)
        for i, v in vec.items():
            out[i] = v
        return GradedElement(k, tuple(out))

    def _times_generator(self, vec: SparseVec, k: int, j: int) -> SparseVec:
        """``vec * e_j`` for ``vec`` in degree ``k``; result in degree ``k+1``."""
        table = self.component(k + 1).right
        out: SparseVec = {}
        for b, c in vec.items():
            for t, v in table[b][j].items():
                nv = out.get(t, 0) + c * v
                if nv:
                    out[t] = nv
                else:
                    out.pop(t, None)
        return out

    def _times_linear(self, vec: SparseVec, k: int, lin: Sequence) -> SparseVec:
        out: SparseVec = {}
        for j, a in enumerate(lin):
            if not a:
                continue
            for t, v in self._times_generator(vec, k, j).items():
                nv = out.get(t, 0) + a * v
                if nv:
                    out[t] = nv
                else:
                    out.pop(t, None)
        return out

    def reduce_word(self, word: Word) -> GradedElement:
        """Normal-form coordinates of an arbitrary word."""
        vec: SparseVec = {0: self.field.one}
        for t, j in enumerate(word):
            vec = self._times_generator(vec, t, j)
        return self._to_dense(len(word), vec)

    def from_tensor(self, k: int, terms: Dict[Word, object]) -> GradedElement:
        """Project ``sum c_w w`` (words of length ``k``) to the quotient."""
        acc = self.zero(k)
        for w, c in terms.items():
            if len(w) != k:
                raise ValueError("inhomogeneous tensor")
            c = self.field(c)
            if c:
                acc = acc + self.reduce_word(w).scale(c)
        return acc

    def multiply(self, a: GradedElement, b: GradedElement) -> GradedElement:
        k = a.degree
        words = self.component(b.degree).words
        total: SparseVec = {}
        start = {i: v for i, v in enumerate(a.coords) if v}
        for w, c in zip(words, b.coords):
            if not c:
                continue
            vec = start
            for t, j in enumerate(w):
                vec = self._times_generator(vec, k + t, j)
            for i, v in vec.items():
                nv = total.get(i, 0) + c * v
                if nv:
                    total[i] = nv
                else:
                    total.pop(i, None)
        return self._to_dense(a.degree + b.degree, total)

    def product(self, *elements: GradedElement) -> GradedElement:
        acc = self.unit()
        for e in elements:
            acc = self.multiply(acc, e)
        return acc

    def projection_matrix(self, k: int) -> Matrix:
        """Rows indexed by all ``n**k`` words; row ``w`` = coordinates of ``w``."""
        rows = [self.reduce_word(index_word(i, self.n, k)).coords for i in range(self.n ** k)]
        return Matrix(rows, self.field, cols=self.dim(k))

    # -- linear maps on generators ------------------------------------------

    def image_of_word(self, images: Matrix, word: Word) -> GradedElement:
        """Apply the algebra map sending ``e_i`` to row ``i`` of ``images``."""
        vec: SparseVec = {0: self.field.one}
        for t, j in enumerate(word):
            vec = self._times_linear(vec, t, images.row(j))
        return self._to_dense(len(word), vec)

    def map_on_component(self, images: Matrix, k: int) -> Matrix:
        """Matrix (row convention) of the induced map on ``A_k``."""
        rows = [self.image_of_word(images, w).coords for w in self.component(k).words]
        return Matrix(rows, self.field, cols=self.dim(k))

    def relation_contains(self, vec: SparseVec) -> bool:
        """Is a tensor vector over ``V (x) V`` inside ``R``?"""
        return in_row_space(self._rel_rows, self._rel_pivots, vec)

    def failing_relation(self, images: Matrix) -> Optional[int]:
        """Index of a relation not mapped into ``R`` by ``images``, else ``None``."""
        kk = images.kron(images)
        for idx, r in enumerate(self.relations.entries):
            img = kk.apply_row(r)
            if not self.relation_contains({j: v for j, v in enumerate(img) if v}):
                return idx
        return None

    def relation_strings(self) -> List[str]:
        return [tensor_to_string(r, self.generator_names) for r in self.relations.entries]


def tensor_to_string(row: Sequence, names: Sequence[str]) -> str:
    n = len(names)
    parts = []
    for idx, c in enumerate(row):
        if not c:
            continue
        i, j = divmod(idx, n)
        sep = " " if names[i].endswith("*") else "*"
        mono = f"{names[i]}{sep}{names[j]}"
        if c == 1:
            term = mono
        elif c == -1:
            term = f"-{mono}"
        else:
            term = f"{c}*{mono}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def quadratic_dual(A: QuadraticPresentation) -> QuadraticPresentation:
    """``A^! = T(V*)/<R^perp>`` with the pairing ``<e_i* e_j*, e_k e_l> = d_ik d_jl``."""
    n = A.n
    if A.relations.rows:
        perp = null_space(A.relations)
    else:
        perp = Matrix.identity(n * n, A.field)
    return QuadraticPresentation([dual_name(g) for g in A.generator_names], perp, A.field)


@dataclass
class KoszulReport:
    """Outcome of the Hilbert-series test ``H_A(t) H_{A^!}(-t) = 1``."""

    passed: bool
    bound: int
    dims: List[int]
    dual_dims: List[int]
    coefficients: List[int]
    label: str = "numerical Koszulity (necessary condition)"

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "passed": self.passed,
            "bound": self.bound,
            "dims": self.dims,
            "dual_dims": self.dual_dims,
            "coefficients": self.coefficients,
        }


def koszul_check(A: QuadraticPresentation, bound: int = DEFAULT_DEGREE_BOUND) -> KoszulReport:
    if bound < 2:
        raise ValueError("koszul_check needs a degree bound of at least 2")
    dims = A.hilbert(bound)
    dual_dims = quadratic_dual(A).hilbert(bound)
    coeffs = [
        sum((-1) ** k * dual_dims[k] * dims[m - k] for k in range(m + 1)) for m in range(bound + 1)
    ]
    passed = all(c == (1 if m == 0 else 0) for m, c in enumerate(coeffs))
    return KoszulReport(passed, bound, dims, dual_dims, coeffs)


def presentation_from_polys(
    generator_names: Sequence[str], relations: Sequence[Dict[Word, object]], field=QQ
) -> QuadraticPresentation:
    """Build from relations given as ``{(i, j): coeff}`` dictionaries."""
    n = len(generator_names)
    rows = []
    for rel in relations:
        row = [field.zero] * (n * n)
        for w, c in rel.items():
            if len(w) != 2:
                raise ValueError("relations must be homogeneous of degree 2")
            row[word_index(w, n)] += field(c)
        rows.append(row)
    return QuadraticPresentation(generator_names, Matrix(rows, field, cols=n * n), field)
