"""Integer exponent problems ``C_1^{k_1} ... C_m^{k_m} = T`` for commuting matrices.

Strategy, in order:

1. bounded search over ``[-bound, bound]^m``, smallest ``(sum |k_i|, k)`` first;
2. if every ``C_i`` has small finite order, search one full period (complete);
3. over the rationals, if every ``C_i`` is quasi-unipotent, reduce to a linear
   system on matrix logarithms of unipotent powers (complete when that
   system has a unique solution);
4. otherwise the answer is left open.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Matrix, null_space, solve


@dataclass(frozen=True)
class ExponentSet:
    """Allowed values for one exponent: all, none, a residue class, or one value."""

    kind: str
    value: int = 0
    modulus: int = 1

    @classmethod
    def all(cls) -> "ExponentSet":
        return cls("all")

    @classmethod
    def none(cls) -> "ExponentSet":
        return cls("none")

    @classmethod
    def fixed(cls, v: int) -> "ExponentSet":
        return cls("fixed", v)

    @classmethod
    def residue(cls, r: int, m: int) -> "ExponentSet":
        if m == 1:
            return cls.all()
        return cls("residue", r % m, m)

    def contains(self, k: int) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "none":
            return False
        if self.kind == "fixed":
            return k == self.value
        return k % self.modulus == self.value

    def describe(self) -> str:
        if self.kind == "residue":
            return f"k = {self.value} mod {self.modulus}"
        if self.kind == "fixed":
            return f"k = {self.value}"
        return self.kind


def _height(x: Fraction) -> int:
    return max(abs(x.numerator), abs(x.denominator))


def rational_log(base, value, field) -> ExponentSet:
    """All integers ``m`` with ``base**m == value``."""
    base, value = field(base), field(value)
    if not base:
        raise ValueError("rational_log with zero base")
    if not value:
        return ExponentSet.none()
    if field.characteristic == 0:
        if base == 1:
            return ExponentSet.all() if value == 1 else ExponentSet.none()
        if base == -1:
            if value == 1:
                return ExponentSet.residue(0, 2)
            if value == -1:
                return ExponentSet.residue(1, 2)
            return ExponentSet.none()
        # |base| != 1: heights grow at least like 2^|m|, so m is unique and small.
        limit = _height(value).bit_length() + 1
        for m in range(-limit, limit + 1):
            if base ** m == value:
                return ExponentSet.fixed(m)
        return ExponentSet.none()
    order, power, hit = None, field.one, None
    for k in range(field.characteristic):
        if power == value and hit is None:
            hit = k
        power = power * base
        if power == 1:
            order = k + 1
            break
    if hit is None:
        return ExponentSet.none()
    return ExponentSet.residue(hit, order)


def finite_order(C: Matrix, limit: int) -> Optional[int]:
    """Smallest ``k <= limit`` with ``C^k = I``, else ``None``."""
    eye = Matrix.identity(C.rows, C.field)
    P = C
    for k in range(1, limit + 1):
        if P == eye:
            return k
        P = P @ C
    return None


def _totient(q: int) -> int:
    out, m, p = q, q, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _root_of_unity_period(n: int) -> int:
    """lcm of all ``q`` whose cyclotomic polynomial has degree at most ``n``."""
    K = 1
    q = 1
    # phi(q) >= sqrt(q/2), so q <= 2 n^2 suffices.
    while q <= 2 * n * n + 2:
        if _totient(q) <= n:
            K = K * q // math.gcd(K, q)
        q += 1
    return K


def is_unipotent(U: Matrix) -> bool:
    N = U - Matrix.identity(U.rows, U.field)
    return (N ** U.rows).is_zero() if U.rows else True


def quasi_unipotent_period(C: Matrix) -> Optional[int]:
    """Smallest ``k`` with ``C^k`` unipotent (rational matrices only), else ``None``."""
    if C.field.characteristic != 0:
        return None
    K = _root_of_unity_period(max(C.rows, 1))
    if not is_unipotent(C ** K):
        return None
    for k in sorted(d for d in range(1, K + 1) if K % d == 0):
        if is_unipotent(C ** k):
            return k
    return K


def unipotent_log(U: Matrix) -> Matrix:
    """Exact logarithm of a unipotent matrix (a finite series)."""
    n = U.rows
    N = U - Matrix.identity(n, U.field)
    L = Matrix.zeros(n, n, U.field)
    P = N
    for j in range(1, n):
        L = L + P.scale(Fraction((-1) ** (j + 1), j))
        P = P @ N
    return L


@dataclass
class ExponentSearch:
    witness: Optional[Tuple[int, ...]]
    complete: bool
    method: str
    notes: List[str] = field(default_factory=list)


def _key(k: Sequence[int]):
    return (sum(abs(x) for x in k), tuple(k))


def _product(mats: Sequence[Matrix], ks: Sequence[int], cache: Dict) -> Matrix:
    out = None
    for i, (C, k) in enumerate(zip(mats, ks)):
        P = cache.get((i, k))
        if P is None:
            P = C ** k
            cache[(i, k)] = P
        out = P if out is None else out @ P
    return out


def _ranges(constraints: Sequence[ExponentSet], spans: Sequence[int]) -> List[List[int]]:
    out = []
    for c, s in zip(constraints, spans):
        if c.kind == "fixed":
            out.append([c.value])
        else:
            out.append([k for k in range(-s, s + 1) if c.contains(k)])
    return out


def _box_search(mats, target, constraints, spans, cache) -> Optional[Tuple[int, ...]]:
    cands = sorted(itertools.product(*_ranges(constraints, spans)), key=_key)
    for k in cands:
        if _product(mats, k, cache) == target:
            return tuple(k)
    return None


def solve_exponents(
    mats: Sequence[Matrix],
    target: Matrix,
    constraints: Sequence[ExponentSet] = None,
    bound: int = 20,
) -> ExponentSearch:
    """Find ``k`` with ``prod C_i^{k_i} = target``; the ``C_i`` must commute."""
    m = len(mats)
    constraints = list(constraints) if constraints is not None else [ExponentSet.all()] * m
    if any(c.kind == "none" for c in constraints):
        return ExponentSearch(None, True, "constraints", ["an exponent has no admissible value"])
    cache: Dict = {}
    hit = _box_search(mats, target, constraints, [bound] * m, cache)
    if hit is not None:
        return ExponentSearch(hit, True, "bounded search")

    orders = [finite_order(C, 2 * bound + 1) for C in mats]
    if all(o is not None for o in orders):
        spans = []
        for o, c in zip(orders, constraints):
            mod = c.modulus if c.kind == "residue" else 1
            spans.append(o * mod // math.gcd(o, mod))
        hit = _box_search(mats, target, constraints, spans, cache)
        return ExponentSearch(hit, True, "finite order", [f"orders {orders}"])

    if target.field.characteristic != 0:
        return ExponentSearch(None, False, "bounded search", ["no finite order found within the bound"])
    periods = [quasi_unipotent_period(C) for C in mats]
    if any(p is None for p in periods):
        if m == 1:
            return _single_by_determinant(mats[0], target, constraints[0])
        return ExponentSearch(None, False, "bounded search", ["a matrix is not quasi-unipotent"])
    return _log_linear(mats, target, constraints, periods)


def _single_by_determinant(C: Matrix, target: Matrix, cons: ExponentSet) -> ExponentSearch:
    """Infinite-order ``C``: at most one solution; pin it via ``det``."""
    logs = rational_log(_det(C), _det(target), C.field)
    if logs.kind == "none":
        return ExponentSearch(None, True, "determinant", ["det(C)^k never equals det(target)"])
    if logs.kind == "fixed":
        k = logs.value
        ok = cons.contains(k) and C ** k == target
        return ExponentSearch((k,) if ok else None, True, "determinant")
    return ExponentSearch(None, False, "bounded search", ["determinant does not pin the exponent"])


def _det(M: Matrix):
    n = M.rows
    if n == 0:
        return M.field.one
    rows = [list(r) for r in M.entries]
    det = M.field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return M.field.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = 1 / rows[c][c]
        for r in range(c + 1, n):
            f = rows[r][c] * inv
            if f:
                for k in range(c, n):
                    rows[r][k] = rows[r][k] - f * rows[c][k]
    return det


def determinant(M: Matrix):
    return _det(M)


def _log_linear(mats, target, constraints, periods) -> ExponentSearch:
    m = len(mats)
    K = 1
    for p in periods:
        K = K * p // math.gcd(K, p)
    for c in constraints:
        if c.kind == "residue":
            K = K * c.modulus // math.gcd(K, c.modulus)
    n = target.rows
    logs = [unipotent_log(C ** K) for C in mats]
    free = [i for i in range(m) if constraints[i].kind != "fixed"]
    # Coordinates whose log vanishes have finite order dividing K: any lift works.
    active = [i for i in free if not logs[i].is_zero()]
    lifted = [i for i in free if logs[i].is_zero()]
    if active:
        A = Matrix([[logs[i].entries[r][c] for i in active] for r in range(n) for c in range(n)], target.field)
        kernel_dim = null_space(A).rows
    else:
        A, kernel_dim = None, 0
    residue_ranges = []
    for i in range(m):
        if constraints[i].kind == "fixed":
            residue_ranges.append([constraints[i].value])
        else:
            residue_ranges.append([r for r in range(K) if constraints[i].contains(r)])
    best = None
    complete = kernel_dim == 0
    for r in itertools.product(*residue_ranges):
        inv = _product(mats, [-x for x in r], {})
        T = inv @ target
        if not is_unipotent(T):
            continue
        LT = unipotent_log(T)
        if active:
            sol = solve(A, [LT.entries[a][b] for a in range(n) for b in range(n)])
            if sol is None:
                continue
            if kernel_dim:
                continue
            if any(Fraction(s).denominator != 1 for s in sol):
                continue
            ks = list(r)
            for i, s in zip(active, sol):
                ks[i] = r[i] + K * int(s)
        else:
            if not LT.is_zero():
                continue
            ks = list(r)
        for i in lifted:
            # smallest |k| in the class r_i + K Z
            lo = r[i] - K * ((r[i] + K // 2) // K)
            ks[i] = lo if abs(lo) <= abs(lo + K) else lo + K
        ks = tuple(ks)
        if best is None or _key(ks) < _key(best):
            best = ks
    notes = [f"unipotent period {K}"]
    if not complete:
        notes.append("logarithms are linearly dependent; exact decision unavailable")
    return ExponentSearch(best, complete or best is not None, "unipotent logarithm", notes)
