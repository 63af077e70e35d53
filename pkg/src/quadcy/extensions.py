"""Ore, trimmed double Ore and iterated skew extensions, their Nakayama maps
and Calabi-Yau criteria.

Every closed-form Nakayama description is compared with the Frobenius engine
run on the built presentation; a disagreement raises ``CrossCheckMismatch``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CrossCheckMismatch, NotCommuting, NotKoszulRegular
from .exponents import ExponentSet, rational_log, solve_exponents
from .frobenius import dual_of, frobenius_of_dual, hdet, nakayama_nu
from .linalg import Matrix, block_diagonal, same_row_space
from .morphisms import (
    GradedAut,
    SigmaHom,
    SigmaInverse,
    WXYZ,
    check_automorphism,
    check_sigma,
    det_l,
    det_r,
    invert_sigma,
    wxyz,
)
from .quadratic import DEFAULT_DEGREE_BOUND, KoszulReport, QuadraticPresentation, dual_name, koszul_check

DEFAULT_SEARCH_BOUND = 20


# -- specs -----------------------------------------------------------------


@dataclass(frozen=True)
class OreExtensionSpec:
    base: QuadraticPresentation
    theta: GradedAut
    new_generator_name: str = "t"

    @classmethod
    def build(cls, base, theta, name="t") -> "OreExtensionSpec":
        return cls(base, check_automorphism(base, _mat(theta, base)), name)


@dataclass(frozen=True)
class DoubleOreSpec:
    base: QuadraticPresentation
    sigma: SigmaHom
    names: Tuple[str, str] = ("y1", "y2")

    @property
    def p(self):
        return self.sigma.p

    @property
    def q(self):
        return self.sigma.q

    @classmethod
    def build(cls, base, p, q, S, names=("y1", "y2")) -> "DoubleOreSpec":
        sig = check_sigma(base, p, q, S)
        invert_sigma(base, sig)
        return cls(base, sig, tuple(names))

    def inverse(self) -> SigmaInverse:
        return invert_sigma(self.base, self.sigma)


@dataclass(frozen=True)
class IteratedSpec:
    base: QuadraticPresentation
    thetas: Tuple[GradedAut, ...]
    names: Tuple[str, ...] = ()

    @classmethod
    def build(cls, base, thetas, names=None) -> "IteratedSpec":
        auts = tuple(check_automorphism(base, _mat(t, base)) for t in thetas)
        for i in range(len(auts)):
            for j in range(i + 1, len(auts)):
                a, b = auts[i].matrix, auts[j].matrix
                if a @ b != b @ a:
                    raise NotCommuting(f"theta_{i + 1} and theta_{j + 1} do not commute", pair=[i + 1, j + 1])
        if names is None:
            names = tuple(f"y{i + 1}" for i in range(len(auts)))
        if len(names) != len(auts):
            raise ValueError("one generator name per automorphism")
        return cls(base, auts, tuple(names))


@dataclass
class NakayamaDescription:
    """``nu`` of an extension: a block on the base and a block on the new generators."""

    on_base: Matrix
    on_new_generators: Matrix
    engine: Optional[Matrix] = None
    extra: Dict[str, object] = field(default_factory=dict)

    def full(self) -> Matrix:
        return block_diagonal(self.on_base, self.on_new_generators) if self.on_new_generators.rows else self.on_base

    def agrees_with_engine(self) -> Optional[bool]:
        return None if self.engine is None else self.engine == self.full()

    def is_identity(self) -> bool:
        return self.full().is_identity()


@dataclass
class CyVerdict:
    status: str  # "yes" | "no" | "unknown"
    witness: Optional[Tuple[int, ...]] = None
    reasons: List[str] = field(default_factory=list)
    bound_used: int = 0
    diagnostics: Dict[str, object] = field(default_factory=dict)


def _mat(theta, A: QuadraticPresentation) -> Matrix:
    if isinstance(theta, GradedAut):
        return theta.matrix
    if isinstance(theta, Matrix):
        return theta
    return Matrix(theta, A.field)


# -- presentations ---------------------------------------------------------


def _embed_rows(A: QuadraticPresentation, N: int) -> List[Dict[int, object]]:
    """Relations of ``A`` as tensors over ``N >= n`` generators, ``A``'s first."""
    n = A.n
    rows = []
    for r in A.relations.entries:
        rows.append({(i // n) * N + (i % n): v for i, v in enumerate(r) if v})
    return rows


def _add(row: Dict[int, object], key: int, v) -> None:
    if not v:
        return
    nv = row.get(key, 0) + v
    if nv:
        row[key] = nv
    else:
        row.pop(key, None)


def _dense(rows, N, F) -> Matrix:
    return Matrix.from_sparse(rows, N * N, F)


def ore_extend(spec: OreExtensionSpec) -> QuadraticPresentation:
    """``A[t; theta]``: relations of ``A`` and ``t e_i - theta(e_i) t``."""
    A, C = spec.base, spec.theta.matrix
    n, N, F = A.n, A.n + 1, A.field
    rows = _embed_rows(A, N)
    for i in range(n):
        row: Dict[int, object] = {}
        _add(row, n * N + i, F.one)
        for j in range(n):
            _add(row, j * N + n, -C[i, j])
        rows.append(row)
    return QuadraticPresentation(A.generator_names + (spec.new_generator_name,), _dense(rows, N, F), F)


def double_ore_extend(spec: DoubleOreSpec) -> QuadraticPresentation:
    """Trimmed double extension ``A_P[y1, y2; sigma]``."""
    A, s = spec.base, spec.sigma
    n, N, F = A.n, A.n + 2, A.field
    y1, y2 = n, n + 1
    rows = _embed_rows(A, N)
    rel: Dict[int, object] = {}
    _add(rel, y2 * N + y1, F.one)
    _add(rel, y1 * N + y2, -s.p)
    _add(rel, y1 * N + y1, -s.q)
    rows.append(rel)
    for j, yj in ((1, y1), (2, y2)):
        for i in range(n):
            row: Dict[int, object] = {}
            _add(row, yj * N + i, F.one)
            for k, yk in ((1, y1), (2, y2)):
                S = s.block(j, k)
                for l in range(n):
                    _add(row, l * N + yk, -S[i, l])
            rows.append(row)
    return QuadraticPresentation(A.generator_names + spec.names, _dense(rows, N, F), F)


def dual_presentation_double_ore(spec: DoubleOreSpec, phi: SigmaInverse = None) -> QuadraticPresentation:
    """``B^!`` written from ``A^!``, the dual of the two-generator part, and ``phi``.

    The result is checked to span the same relation space as the computed
    quadratic dual of the built extension.
    """
    A = spec.base
    phi = phi if phi is not None else spec.inverse()
    n, N, F = A.n, A.n + 2, A.field
    y1, y2 = n, n + 1
    p, q = spec.p, spec.q
    rows = _embed_rows(dual_of(A), N)
    rows.append({k: v for k, v in ((y1 * N + y1, F.one), (y2 * N + y1, q)) if v})
    rows.append({k: v for k, v in ((y1 * N + y2, F.one), (y2 * N + y1, p)) if v})
    rows.append({y2 * N + y2: F.one})
    for j, yj in ((1, y1), (2, y2)):
        for i in range(n):
            row: Dict[int, object] = {}
            _add(row, yj * N + i, F.one)
            for k, yk in ((1, y1), (2, y2)):
                P = phi.block(j, k)
                for l in range(n):
                    _add(row, l * N + yk, P[l, i])
            rows.append(row)
    names = tuple(dual_name(g) for g in A.generator_names + spec.names)
    Bd = QuadraticPresentation(names, _dense(rows, N, F), F)
    computed = dual_of(double_ore_extend(spec))
    if not same_row_space(Bd.relations, computed.relations):
        raise CrossCheckMismatch(
            "dual presentation written from phi differs from the computed quadratic dual",
            written=Bd.relation_strings(),
            computed=computed.relation_strings(),
        )
    return Bd


def iterated_extend(spec: IteratedSpec) -> QuadraticPresentation:
    """``A[y_1, ..., y_m; theta_1, ..., theta_m]`` with commuting ``y``'s."""
    A = spec.base
    m = len(spec.thetas)
    n, N, F = A.n, A.n + m, A.field
    for i in range(m):
        for j in range(i + 1, m):
            a, b = spec.thetas[i].matrix, spec.thetas[j].matrix
            if a @ b != b @ a:
                raise NotCommuting(f"theta_{i + 1} and theta_{j + 1} do not commute", pair=[i + 1, j + 1])
    rows = _embed_rows(A, N)
    for a, th in enumerate(spec.thetas):
        ya = n + a
        C = th.matrix
        for i in range(n):
            row: Dict[int, object] = {}
            _add(row, ya * N + i, F.one)
            for j in range(n):
                _add(row, j * N + ya, -C[i, j])
            rows.append(row)
    for a in range(m):
        for b in range(a + 1, m):
            rows.append({(n + a) * N + n + b: F.one, (n + b) * N + n + a: -F.one})
    return QuadraticPresentation(A.generator_names + spec.names, _dense(rows, N, F), F)


# -- validation ------------------------------------------------------------


def require_koszul_regular(A: QuadraticPresentation, bound: int = DEFAULT_DEGREE_BOUND) -> KoszulReport:
    """Operational check: numerical Koszulity up to ``bound`` and a Frobenius dual."""
    rep = koszul_check(A, bound)
    if not rep.passed:
        raise NotKoszulRegular(
            "numerical Koszulity fails", coefficients=rep.coefficients, dims=rep.dims, dual_dims=rep.dual_dims
        )
    frobenius_of_dual(A)
    return rep


def free_module_dims(A: QuadraticPresentation, extra: int, bound: int) -> List[int]:
    """Expected dims of an extension free over ``A`` on ``extra`` commuting-ish variables."""
    dims = A.hilbert(bound)
    for _ in range(extra):
        dims = [sum(dims[: k + 1]) for k in range(bound + 1)]
    return dims


def _mismatch(what: str, closed: Matrix, engine: Matrix, **extra):
    raise CrossCheckMismatch(
        f"closed-form {what} disagrees with the Frobenius engine",
        closed_form=closed.to_strings(),
        engine=engine.to_strings(),
        **extra,
    )


# -- Nakayama descriptions ---------------------------------------------------


def nakayama_ore(spec: OreExtensionSpec, cross_check: bool = True, bound: int = DEFAULT_DEGREE_BOUND):
    A = spec.base
    require_koszul_regular(A, bound)
    N = nakayama_nu(A).nu
    C = spec.theta.matrix
    h = hdet(A, C)
    desc = NakayamaDescription(N @ C.inverse(), Matrix([[h]], A.field), extra={"hdet_theta": h})
    if cross_check:
        desc.engine = nakayama_nu(ore_extend(spec)).nu
        if not desc.agrees_with_engine():
            _mismatch("Ore Nakayama map", desc.full(), desc.engine)
    return desc


def double_ore_scalars(spec: DoubleOreSpec) -> WXYZ:
    return wxyz(spec.base, spec.sigma)


def nakayama_double_ore(spec: DoubleOreSpec, cross_check: bool = True, bound: int = DEFAULT_DEGREE_BOUND):
    A = spec.base
    F = A.field
    require_koszul_regular(A, bound)
    N = nakayama_nu(A).nu
    Dr = det_r(A, spec.sigma).matrix
    s = double_ore_scalars(spec)
    p, q = spec.p, spec.q
    alpha = q * s.X + q / p * s.X + s.W / p
    beta = q * s.Z + q / p * s.Z + s.Y / p
    on_new = Matrix([[alpha, p * s.X], [beta, p * s.Z]], F)
    desc = NakayamaDescription(N @ Dr.inverse(), on_new, extra={"W": s.W, "X": s.X, "Y": s.Y, "Z": s.Z})
    if cross_check:
        desc.engine = nakayama_nu(double_ore_extend(spec)).nu
        if not desc.agrees_with_engine():
            _mismatch("double Ore Nakayama map", desc.full(), desc.engine, W=s.W, X=s.X, Y=s.Y, Z=s.Z)
    return desc


def nakayama_skew_laurent(A: QuadraticPresentation, theta, cross_check: bool = True, bound=DEFAULT_DEGREE_BOUND):
    """``nu`` of ``A[t^{+-1}; theta]``: that of the Ore extension, with ``t^{-1}`` scaled inversely."""
    spec = OreExtensionSpec.build(A, theta)
    desc = nakayama_ore(spec, cross_check, bound)
    h = desc.on_new_generators[0, 0]
    desc.extra["t"] = h
    desc.extra["t_inverse"] = 1 / h
    return desc


def nakayama_iterated(spec: IteratedSpec, cross_check: bool = True, bound: int = DEFAULT_DEGREE_BOUND):
    A = spec.base
    F = A.field
    require_koszul_regular(A, bound)
    N = nakayama_nu(A).nu
    comp = Matrix.identity(A.n, F)
    for th in spec.thetas:
        comp = comp @ th.matrix
    hs = [hdet(A, th) for th in spec.thetas]
    desc = NakayamaDescription(N @ comp.inverse(), Matrix.diagonal(hs, F), extra={"hdets": hs})
    if cross_check:
        desc.engine = nakayama_nu(iterated_extend(spec)).nu
        if not desc.agrees_with_engine():
            _mismatch("iterated Nakayama map", desc.full(), desc.engine)
    return desc


# -- Calabi-Yau criteria ---------------------------------------------------


def _verdict_check(verdict_yes: bool, engine_identity: bool, label: str, diagnostics: dict):
    if verdict_yes != engine_identity:
        raise CrossCheckMismatch(
            f"{label} criterion and direct Nakayama computation disagree",
            criterion=verdict_yes,
            engine_identity=engine_identity,
            diagnostics={k: str(v) for k, v in diagnostics.items()},
        )


def cy_ore(spec: OreExtensionSpec, bound: int = DEFAULT_DEGREE_BOUND) -> CyVerdict:
    A = spec.base
    desc = nakayama_ore(spec, True, bound)
    N = nakayama_nu(A).nu
    C = spec.theta.matrix
    ok = C == N
    diag = {"theta": C, "nu": N, "nu_D": desc.full(), "conditions": {"theta = nu": ok}}
    _verdict_check(ok, desc.engine.is_identity(), "Ore", diag)
    reasons = ["theta = nu" if ok else "theta != nu"]
    return CyVerdict("yes" if ok else "no", None, reasons, 0, diag)


def cy_double_ore(spec: DoubleOreSpec, bound: int = DEFAULT_DEGREE_BOUND) -> CyVerdict:
    A = spec.base
    F = A.field
    desc = nakayama_double_ore(spec, True, bound)
    N = nakayama_nu(A).nu
    Dr = det_r(A, spec.sigma).matrix
    s = double_ore_scalars(spec)
    p, q = spec.p, spec.q
    conds = {
        "det_r sigma = nu": Dr == N,
        "W = p": s.W == p,
        "X = 0": s.X == 0,
        "Y = -(1 + 1/p) q": s.Y == -(1 + 1 / F(p)) * q,
        "Z = 1/p": s.Z == 1 / F(p),
    }
    ok = all(conds.values())
    diag = {
        "det_r": Dr, "nu": N, "W": s.W, "X": s.X, "Y": s.Y, "Z": s.Z, "p": p, "q": q,
        "nu_B": desc.full(), "conditions": conds,
    }
    _verdict_check(ok, desc.engine.is_identity(), "double Ore", diag)
    reasons = [f"{k}: {'holds' if v else 'fails'}" for k, v in conds.items()]
    return CyVerdict("yes" if ok else "no", None, reasons, 0, diag)


def _from_search(res, bound: int, reasons: List[str], diag: dict, shift_note: str) -> CyVerdict:
    diag = dict(diag, method=res.method, search_notes=res.notes)
    if res.witness is not None:
        reasons.append(f"witness {res.witness} found by {res.method}")
        reasons.append(shift_note)
        return CyVerdict("yes", res.witness, reasons, bound, diag)
    if res.complete:
        reasons.append(f"no exponent exists ({res.method})")
        return CyVerdict("no", None, reasons, bound, diag)
    reasons.append(f"no exponent in [-{bound}, {bound}] and the search is not exhaustive")
    return CyVerdict("unknown", None, reasons, bound, diag)


def cy_skew_laurent(A: QuadraticPresentation, theta, bound: int = DEFAULT_SEARCH_BOUND,
                    degree_bound: int = DEFAULT_DEGREE_BOUND) -> CyVerdict:
    require_koszul_regular(A, degree_bound)
    C = check_automorphism(A, _mat(theta, A)).matrix
    N = nakayama_nu(A).nu
    h = hdet(A, C)
    diag = {"theta": C, "nu": N, "hdet_theta": h}
    if h != 1:
        return CyVerdict("no", None, [f"hdet theta = {h} != 1"], bound, diag)
    res = solve_exponents([C], N, [ExponentSet.all()], bound)
    note = "witness n satisfies theta^n = nu; the corresponding inner automorphism is conjugation by t^(n-1)"
    return _from_search(res, bound, ["hdet theta = 1"], diag, note)


def cy_laurent_diagonal(A: QuadraticPresentation, p, tau, xi, bound: int = DEFAULT_SEARCH_BOUND,
                        degree_bound: int = DEFAULT_DEGREE_BOUND) -> CyVerdict:
    """Localized double extension with ``sigma = diag(tau, xi)``, ``q = 0``."""
    F = A.field
    require_koszul_regular(A, degree_bound)
    sig = check_sigma(A, p, 0, [[_mat(tau, A), Matrix.zeros(A.n, A.n, F)], [Matrix.zeros(A.n, A.n, F), _mat(xi, A)]])
    T = check_automorphism(A, sig.block(1, 1)).matrix
    X = check_automorphism(A, sig.block(2, 2)).matrix
    if T @ X != X @ T:
        raise NotCommuting("tau and xi do not commute", pair=[1, 2])
    p = sig.p
    N = nakayama_nu(A).nu
    ht, hx = hdet(A, T), hdet(A, X)
    # hdet(tau) = p^m and hdet(xi) = p^(-n)
    cons_m = rational_log(p, ht, F)
    cons_n = rational_log(1 / p, hx, F)
    diag = {
        "tau": T, "xi": X, "nu": N, "p": p, "hdet_tau": ht, "hdet_xi": hx,
        "n_constraint": cons_n.describe(), "m_constraint": cons_m.describe(),
    }
    reasons = [f"hdet tau = p^m requires {cons_m.describe()}", f"hdet xi = p^-n requires {cons_n.describe()}"]
    if p != 1:
        reasons.append("p != 1: the body criterion (hdet tau = p^m, hdet xi = p^-n) is used, not hdet = 1")
    res = solve_exponents([T, X], N, [cons_n, cons_m], bound)
    note = "witness (n, m) satisfies tau^n xi^m = nu; the inner exponents are shifted by one"
    return _from_search(res, bound, reasons, diag, note)


def cy_iterated(spec: IteratedSpec, bound: int = DEFAULT_DEGREE_BOUND) -> CyVerdict:
    A = spec.base
    desc = nakayama_iterated(spec, True, bound)
    N = nakayama_nu(A).nu
    comp = Matrix.identity(A.n, A.field)
    for th in spec.thetas:
        comp = comp @ th.matrix
    hs = desc.extra["hdets"]
    conds = {"theta_1 o ... o theta_m = nu": comp == N}
    for i, h in enumerate(hs):
        conds[f"hdet theta_{i + 1} = 1"] = h == 1
    ok = all(conds.values())
    diag = {"composite": comp, "nu": N, "hdets": hs, "nu_R": desc.full(), "conditions": conds}
    _verdict_check(ok, desc.engine.is_identity(), "iterated", diag)
    reasons = [f"{k}: {'holds' if v else 'fails'}" for k, v in conds.items()]
    return CyVerdict("yes" if ok else "no", None, reasons, 0, diag)


def cy_iterated_laurent(spec: IteratedSpec, bound: int = DEFAULT_SEARCH_BOUND,
                        degree_bound: int = DEFAULT_DEGREE_BOUND) -> CyVerdict:
    A = spec.base
    require_koszul_regular(A, degree_bound)
    N = nakayama_nu(A).nu
    mats = [th.matrix for th in spec.thetas]
    hs = [hdet(A, C) for C in mats]
    diag = {"thetas": mats, "nu": N, "hdets": hs}
    bad = [i + 1 for i, h in enumerate(hs) if h != 1]
    if bad:
        return CyVerdict("no", None, [f"hdet theta_{i} != 1" for i in bad], bound, diag)
    res = solve_exponents(mats, N, None, bound)
    note = "witness k satisfies theta_1^k_1 ... theta_m^k_m = nu"
    return _from_search(res, bound, ["all hdet theta_i = 1"], diag, note)
