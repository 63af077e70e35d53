"""Acceptance criteria, one check per criterion.

Each check prints a ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import contextlib
import io
import itertools
import json
import os
import random
import sys
import time
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from algebras import (  # noqa: E402
    I2,
    Z2,
    jordan_aut,
    jordan_diagonal_cy,
    jordan_plane,
    laurent_theta,
    polynomial_ring,
    pq_plane,
    quantum_diagonal,
    quantum_plane,
    skew_plane,
    type_h,
    type_n,
    valid_double_ore_specs,
)
from quadcy.cli import main as cli_main  # noqa: E402
from quadcy.extensions import (  # noqa: E402
    DoubleOreSpec,
    IteratedSpec,
    OreExtensionSpec,
    cy_double_ore,
    cy_iterated_laurent,
    cy_laurent_diagonal,
    cy_ore,
    cy_skew_laurent,
    double_ore_extend,
    dual_presentation_double_ore,
    nakayama_double_ore,
)
from quadcy.frobenius import check_nakayama_identity, dual_of, frobenius_of_dual, hdet, nakayama_mu, nakayama_nu  # noqa: E402
from quadcy.linalg import Matrix, same_row_space  # noqa: E402
from quadcy.morphisms import det_l, det_r, invert_sigma, wxyz, wxyz_inverse  # noqa: E402
from quadcy.quadratic import koszul_check, presentation_from_polys  # noqa: E402

DEGREE_BOUND = 6
NU_J = Matrix([[1, 0], [2, 1]])
RESULTS = {}


def _ok(cond, msg):
    if not cond:
        raise AssertionError(msg)


# 1 -------------------------------------------------------------------------------


def criterion_1():
    nu = nakayama_nu(jordan_plane()).nu
    _ok(nu == NU_J, f"nu = {nu.to_strings()}")
    return "nu(x) = x, nu(y) = 2x + y"


# 2 -------------------------------------------------------------------------------

HDET_SAMPLES = [(1, 0), (3, 5), (-2, 7), (Fraction(1, 2), Fraction(-3, 4)), (Fraction(-5, 3), 11)]


def criterion_2():
    A = jordan_plane()
    for a, b in HDET_SAMPLES:
        h = hdet(A, Matrix(jordan_aut(a, b)))
        _ok(h == Fraction(a) ** 2, f"hdet at a={a}, b={b} is {h}")
    return f"hdet = a^2 at {len(HDET_SAMPLES)} samples"


# 3 -------------------------------------------------------------------------------


def criterion_3():
    pts = [(1, 0), (-1, 0), (1, 1), (2, 3)]
    for p, q in pts:
        computed = dual_of(pq_plane(p, q))
        # y1*y1* + q y2*y1*,  y1*y2* + p y2*y1*,  y2*y2*
        written = presentation_from_polys(
            ["y1*", "y2*"], [{(0, 0): 1, (1, 0): q}, {(0, 1): 1, (1, 0): p}, {(1, 1): 1}]
        )
        _ok(same_row_space(computed.relations, written.relations), f"dual mismatch at (p,q)=({p},{q})")
    return f"dual of the (p,q)-plane matches at {pts}"


# 4 -------------------------------------------------------------------------------


def _convolution(h, hd, bound):
    return [sum((-1) ** j * hd[j] * h[k - j] for j in range(k + 1)) for k in range(bound + 1)]


def criterion_4():
    algebras = {
        "jordan": jordan_plane(),
        "quantum": quantum_plane(),
        "jordan diagonal double ore": double_ore_extend(jordan_diagonal_cy()),
        "type N (0,1)": double_ore_extend(type_n(0, 1)),
    }
    for name, A in algebras.items():
        conv = _convolution(A.hilbert(DEGREE_BOUND), dual_of(A).hilbert(DEGREE_BOUND), DEGREE_BOUND)
        _ok(conv == [1] + [0] * DEGREE_BOUND, f"{name}: convolution {conv}")
        _ok(koszul_check(A, DEGREE_BOUND).passed, f"{name}: koszul check")
    for spec in (jordan_diagonal_cy(), type_n(0, 1)):
        a = dual_of(spec.base).hilbert(DEGREE_BOUND)
        b = dual_of(double_ore_extend(spec)).hilbert(DEGREE_BOUND)
        g = lambda m: a[m] if 0 <= m <= DEGREE_BOUND else 0  # noqa: E731
        for m in range(DEGREE_BOUND + 1):
            _ok(b[m] == g(m) + 2 * g(m - 1) + g(m - 2), f"dual dim mismatch in degree {m}")
    return "H(t) H^!(-t) = 1 and dual dimension recursion up to degree 6"


# 5 -------------------------------------------------------------------------------


def criterion_5():
    specs = {"H(1,1)": type_h(1, 1), "H(-1,3)": type_h(-1, 3), "N(0,1)": type_n(0, 1), "N(2,1)": type_n(2, 1)}
    for name, spec in specs.items():
        written = dual_presentation_double_ore(spec)
        computed = dual_of(double_ore_extend(spec))
        _ok(same_row_space(written.relations, computed.relations), f"{name}: relation spaces differ")
    return "written dual = computed dual for " + ", ".join(specs)


# 6 -------------------------------------------------------------------------------


def criterion_6():
    A = jordan_plane()
    specs = {
        "diagonal over jordan": jordan_diagonal_cy(),
        "diagonal over quantum": quantum_diagonal(p=Fraction(1, 2), tau=((2, 0), (0, 3)), xi=((5, 0), (0, 1))),
        "type N f^2-g^2=-1": type_n(0, 1),
        "type N f^2-g^2!=-1": type_n(Fraction(1, 2), 1),  # f^2 - g^2 = -3/4
        "jordan q=1": DoubleOreSpec.build(A, 2, 1, [jordan_aut(1, 1), Z2, Z2, jordan_aut(1, 1)]),
    }
    for name, spec in specs.items():
        d = nakayama_double_ore(spec)  # raises CrossCheckMismatch on disagreement
        _ok(d.agrees_with_engine() and d.engine == nakayama_nu(double_ore_extend(spec)).nu, name)
    record = []
    for h, f in ((1, 1), (-1, 1)):
        spec = type_h(h, f)
        v = cy_double_ore(spec)
        cond = v.diagnostics["conditions"]
        _ok(cond["det_r sigma = nu"], f"type H ({h},{f}): det_r sigma != nu")
        _ok(v.status == "no", f"type H ({h},{f}): verdict {v.status}")
        _ok(not nakayama_double_ore(spec).engine.is_identity(), f"type H ({h},{f}): engine nu is identity")
        record.append(f"h={h}: W={v.diagnostics['W']}, Z={v.diagnostics['Z']}")
    return f"{len(specs)} specs agree; type H engine lands on W = Z = +1 ({'; '.join(record)}), not CY"


# 7 -------------------------------------------------------------------------------

SAMPLES = os.path.join(os.path.dirname(__file__), os.pardir, "samples")


def _sweep(sample):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli_main(["sweep", os.path.join(SAMPLES, sample), "--command", "cy-double-ore"])
    _ok(code == 0, f"sweep exit code {code}")
    return json.loads(out.getvalue())["result"]["rows"]


def criterion_7():
    rows = _sweep("type_n.qa")
    _ok(len(rows) == 25, "type N grid size")
    for r in rows:
        f, g = Fraction(r["params"]["f"]), Fraction(r["params"]["g"])
        yes = r.get("result", {}).get("status") == "yes"
        _ok(yes == (f * f - g * g == -1), f"type N at f={f}, g={g}")
        if "error" in r:
            _ok(f * f == g * g, f"unexpected error at f={f}, g={g}")
    rows = _sweep("type_h.qa")
    for r in rows:
        h, f = Fraction(r["params"]["h"]), Fraction(r["params"]["f"])
        on = r["result"]["diagnostics"]["conditions"]["det_r sigma = nu"]
        _ok(on == (h * h == 1 and f == 1), f"type H det_r locus at h={h}, f={f}")
    return "type N Yes exactly on f^2-g^2=-1; type H det_r sigma = nu exactly at h^2=1, f=1"


# 8 -------------------------------------------------------------------------------


def criterion_8():
    A = jordan_plane()
    _ok(cy_ore(OreExtensionSpec.build(A, NU_J.tolist())).status == "yes", "theta = nu")
    for theta in (I2, jordan_aut(3, 5), jordan_aut(-1, 2)):
        _ok(cy_ore(OreExtensionSpec.build(A, theta)).status == "no", f"theta = {theta}")
    return "Yes for theta = nu, No for 3 other automorphisms"


# 9 -------------------------------------------------------------------------------


def criterion_9():
    A = jordan_plane()
    for n in (1, 2, 5):
        v = cy_skew_laurent(A, laurent_theta(1, n))
        _ok(v.status == "yes" and v.witness == (n,), f"+x family n={n}: {v.status} {v.witness}")
    for n in (2, 4):
        v = cy_skew_laurent(A, laurent_theta(-1, n))
        _ok(v.status == "yes", f"-x family n={n}: {v.status}")
        _ok(Matrix(laurent_theta(-1, n)) ** v.witness[0] == NU_J, f"-x family n={n}: bad witness")
    for n in (1, 3, 5):
        v = cy_skew_laurent(A, laurent_theta(-1, n))
        _ok(v.status == "no", f"-x family n={n}: {v.status}")
    for theta in (jordan_aut(2, 0), jordan_aut(3, 5), jordan_aut(Fraction(1, 2), 1)):
        for bound in (0, 20):
            v = cy_skew_laurent(A, theta, bound)
            _ok(v.status == "no", f"hdet != 1 at {theta}: {v.status}")
    return "witness n for n in {1,2,5}; Yes for -x, n in {2,4}; No for odd n and hdet != 1"


# 10 ------------------------------------------------------------------------------


def criterion_10():
    Q, J = quantum_plane(), jordan_plane()
    minus = [[-1, 0], [0, -1]]
    v = cy_laurent_diagonal(Q, 1, minus, I2)
    _ok(v.status == "yes" and v.witness is not None, "quantum diagonal Laurent")
    n, m = v.witness
    _ok((Matrix(minus) ** n) @ (Matrix(I2) ** m) == nakayama_nu(Q).nu, "witness does not satisfy tau^n xi^m = nu")
    for A, tau, xi in ((Q, minus, I2), (J, jordan_aut(2, 1), jordan_aut(-3, 1))):
        spec = DoubleOreSpec.build(A, 1, 0, [tau, Z2, Z2, xi])
        d = nakayama_double_ore(spec)
        T, X = Matrix(tau), Matrix(xi)
        nu = nakayama_nu(A).nu
        _ok(d.on_base == nu @ (T @ X).inverse(), "base block of closed form")
        _ok(d.on_new_generators == Matrix.diagonal([hdet(A, T), hdet(A, X)]), "new-generator block")
        _ok(d.agrees_with_engine(), "engine disagreement")
    thetas = [laurent_theta(1, 1), laurent_theta(1, 2), laurent_theta(1, 5), laurent_theta(-1, 2),
              laurent_theta(-1, 4), laurent_theta(-1, 3), jordan_aut(2, 0)]
    for theta in thetas:
        a = cy_skew_laurent(J, theta)
        b = cy_iterated_laurent(IteratedSpec.build(J, [theta], ["t"]))
        _ok((a.status, a.witness) == (b.status, b.witness), f"iterated m=1 differs at {theta}")
    return f"quantum witness {v.witness}; closed form on 2 specs; iterated m=1 matches {len(thetas)} cases"


# 11 ------------------------------------------------------------------------------


def _associative(A):
    F = frobenius_of_dual(A)
    E, d = F.algebra, F.top_degree
    basis = [E.basis_element(k, i) for k in range(d + 1) for i in range(E.dim(k))]
    for a, b, c in itertools.product(basis, repeat=3):
        if a.degree + b.degree + c.degree == d and F.pair(E.multiply(a, b), c) != F.pair(a, E.multiply(b, c)):
            return False
    return check_nakayama_identity(F, nakayama_mu(F))


def criterion_11():
    rng = random.Random(20240611)
    specs = valid_double_ore_specs()
    bases = [jordan_plane(), quantum_plane(), skew_plane(3), polynomial_ring(3)]
    exts = [double_ore_extend(s) for s in specs[:6]]
    for A in bases + exts:
        _ok(_associative(A), f"pairing or Nakayama identity fails on {A!r}")
    r = lambda: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))  # noqa: E731
    J, P = jordan_plane(), polynomial_ring(3)
    for i in range(20):
        if i % 2:
            C, D = Matrix(jordan_aut(r(), r())), Matrix(jordan_aut(r(), r()))
            A = J
        else:
            while True:
                C = Matrix([[r() for _ in range(3)] for _ in range(3)])
                D = Matrix([[r() for _ in range(3)] for _ in range(3)])
                if C.rank() == 3 and D.rank() == 3:
                    break
            A = P
        _ok(hdet(A, C @ D) == hdet(A, C) * hdet(A, D), "hdet not multiplicative")
    for A in bases + exts:
        _ok(hdet(A, nakayama_nu(A).nu) == 1, f"hdet(nu) != 1 on {A!r}")
    for spec in specs:
        A, sig = spec.base, spec.sigma
        phi = invert_sigma(A, sig)
        _ok((det_l(sig, phi).matrix @ det_r(A, sig).matrix).is_identity(), "det_r o det_l != id")
        _ok((wxyz(A, sig).matrix(A.field) @ wxyz_inverse(A, phi).matrix(A.field)).is_identity(), "WXYZ identity")
    return f"{len(bases) + len(exts)} algebras, 20 hdet pairs, {len(specs)} sigma instances"


CRITERIA = [globals()[f"criterion_{i}"] for i in range(1, 12)]


def run_criterion(i):
    start = time.perf_counter()
    try:
        detail = CRITERIA[i - 1]()
        ok = True
    except Exception as exc:  # any failure, including engine errors, counts as FAIL
        detail = f"{type(exc).__name__}: {exc}"
        ok = False
    line = f"{'PASS' if ok else 'FAIL'} criterion {i:2d} ({time.perf_counter() - start:.2f}s): {detail}"
    RESULTS[i] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("i", range(1, 12))
def test_criterion(i):
    ok, line = run_criterion(i)
    assert ok, line


if __name__ == "__main__":
    t0 = time.perf_counter()
    ok = all([run_criterion(i)[0] for i in range(1, 12)])
    print(f"total {time.perf_counter() - t0:.2f}s")
    sys.exit(0 if ok else 1)
