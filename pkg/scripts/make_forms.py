"""Generate the coefficient files shipped in src/symrh/data/forms.

Levels 2, 3, 5 in low weight come from eta products (one-dimensional spaces).
Weight 30 at levels 1 and 2 needs a small Hecke computation: T_3 is written
down on an explicit basis of the cusp space, its characteristic polynomial is
factored with sympy, and the newform eigenvectors are read off exactly.

    python3 scripts/make_forms.py [--cutoff 3000] [--out src/symrh/data/forms]
"""

from __future__ import annotations

import argparse
import logging
from fractions import Fraction
from pathlib import Path

import sympy

from symrh.formsrc import (
    IntegerSeries,
    NewformData,
    QuadraticElement,
    delta_series,
    eisenstein_series,
    euler_product,
    save_newform,
    validate_hecke,
)
from symrh.formsrc.series import divisor_sigma_table

log = logging.getLogger("make_forms")


def eta_newform(level: int, weight: int, cutoff: int) -> NewformData:
    e = 24 // (level + 1)
    f = euler_product({1: e, level: e}, cutoff).shift(1)
    return NewformData(level, weight, f"{level}.{weight}.a.a", tuple(f.coeffs[1 : cutoff + 1]), None, "file")


def f2_series(cutoff: int) -> IntegerSeries:
    """2 E2(2 tau) - E2(tau): the weight-2 Eisenstein series on Gamma0(2)."""
    sig = divisor_sigma_table(1, cutoff)
    out = [1] + [24 * (sig[n] - (2 * sig[n // 2] if n % 2 == 0 else 0)) for n in range(1, cutoff + 1)]
    return IntegerSeries(tuple(out))


def cusp_basis(level: int, weight: int, cutoff: int) -> list[IntegerSeries]:
    if level == 1:
        d, e4, e6 = delta_series(cutoff), eisenstein_series(4, cutoff), eisenstein_series(6, cutoff)
        out = []
        for j in range(1, weight // 12 + 1):
            rest = weight - 12 * j
            for b in range(0, rest // 6 + 1):
                if (rest - 6 * b) % 4 == 0:
                    out.append(d**j * e4 ** ((rest - 6 * b) // 4) * e6**b)
                    break
        return out
    if level == 2:
        d2 = euler_product({1: 8, 2: 8}, cutoff).shift(1)
        f2, e4 = f2_series(cutoff), eisenstein_series(4, cutoff)
        rest = weight - 8
        return [d2 * f2**a * e4 ** ((rest - 2 * a) // 4) for a in range(rest // 2, -1, -2)]
    raise ValueError("only levels 1 and 2 are handled")


def hecke_matrix(basis: list[IntegerSeries], p: int, weight: int, rows: int) -> sympy.Matrix:
    """Matrix of T_p (p prime to the level) in the given basis, acting on rows."""
    B = sympy.Matrix([[b[n] for n in range(1, rows + 1)] for b in basis])
    T = sympy.Matrix(
        [
            [b[p * n] + (p ** (weight - 1) * b[n // p] if n % p == 0 else 0) for n in range(1, rows + 1)]
            for b in basis
        ]
    )
    # solve X B = T
    sol = (B * B.T).solve((T * B.T).T).T
    assert sol * B == T, "T_p image not in the span of the basis"
    return sol


def nullvector_quadratic(T: sympy.Matrix, lam: QuadraticElement, D: int) -> list[QuadraticElement]:
    """The (one-dimensional) left null space of T - lam by exact elimination in Q(sqrt D)."""
    n = T.shape[0]
    zero = QuadraticElement(0, 0, D)
    # left eigenvector: v (T - lam) = 0, i.e. (T - lam)^t v^t = 0
    A = [
        [QuadraticElement(Fraction(int(T[j, i].p), int(T[j, i].q)), 0, D) - (lam if i == j else zero) for j in range(n)]
        for i in range(n)
    ]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if A[r][col] != zero), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = A[row][col].inverse()
        A[row] = [x * inv for x in A[row]]
        for r in range(n):
            if r != row and A[r][col] != zero:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    assert len(free) == 1, f"eigenspace has dimension {len(free)}"
    v = [zero] * n
    v[free[0]] = QuadraticElement(1, 0, D)
    for r, c in enumerate(pivots):
        v[c] = -A[r][free[0]]
    return v


def eigenforms(level, weight, cutoff, old_cp=None):
    basis = cusp_basis(level, weight, cutoff)
    dim = len(basis)
    rows = 4 * dim + 4
    x = sympy.Symbol("x")
    T = hecke_matrix([b.truncate(3 * rows + 3) for b in basis], 3, weight, rows)
    cp = sympy.Poly(T.charpoly(x).as_expr(), x)
    if old_cp is not None:
        q, r = sympy.div(cp, old_cp**2)
        assert r.is_zero, "old part does not divide"
        cp = q
    forms = []
    for fac, mult in sympy.factor_list(cp)[1]:
        assert mult == 1, "repeated new eigenvalue"
        deg = fac.degree()
        if deg == 1:
            lam = sympy.solve(fac.as_expr(), x)[0]
            vec = (T - lam * sympy.eye(dim)).T.nullspace()
            assert len(vec) == 1
            c = [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in vec[0]]
            coeffs = [sum(ci * b[n] for ci, b in zip(c, basis)) for n in range(1, cutoff + 1)]
            a1 = coeffs[0]
            coeffs = [ci / a1 for ci in coeffs]
            assert all(ci.denominator == 1 for ci in coeffs)
            forms.append(("rational", [int(ci) for ci in coeffs], None))
        elif deg == 2:
            a2, a1_, a0 = [sympy.Rational(cf) for cf in fac.all_coeffs()]
            disc = a1_ * a1_ - 4 * a2 * a0
            num, den = sympy.fraction(disc)
            D_full = int(num * den)
            core = sympy.factorint(D_full)
            sq = 1
            D = 1
            for pr, e in core.items():
                sq *= pr ** (e // 2)
                D *= pr ** (e % 2)
            # lam = (-a1 + sqrt(disc)) / (2 a2), sqrt(disc) = sq/den * sqrt(D)
            half = Fraction(1, 2 * int(a2))
            lam = QuadraticElement(Fraction(int(-a1_.p), int(a1_.q)) * half, Fraction(int(sq), int(den)) * half, D)
            comps = nullvector_quadratic(T, lam, D)
            coeffs = []
            for n in range(1, cutoff + 1):
                acc = QuadraticElement(0, 0, D)
                for ci, b in zip(comps, basis):
                    if b[n]:
                        acc = acc + ci * b[n]
                coeffs.append(acc)
            lead = coeffs[0]
            nrm = lead.norm()
            inv = QuadraticElement(lead.a / nrm, -lead.b / nrm, D)
            coeffs = [c * inv for c in coeffs]
            assert all(c.is_algebraic_integer() for c in coeffs[:50])
            forms.append(("quadratic", coeffs, D))
        else:
            raise NotImplementedError(f"Hecke field of degree {deg}")
    return forms, sympy.Poly(T.charpoly(x).as_expr(), x)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cutoff", type=int, default=3000)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/symrh/data/forms"))
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    out = Path(args.out)
    X = args.cutoff

    written = []
    for level, weight in ((2, 8), (3, 6), (5, 4)):
        written.append(eta_newform(level, weight, X))

    lvl1, old_cp = eigenforms(1, 30, X)
    for kind, coeffs, D in lvl1:
        written.append(NewformData(1, 30, "1.30.a.a", tuple(coeffs), -1, "file", D, 1))
    lvl2, _ = eigenforms(2, 30, X, old_cp)
    labels = iter("abcdef")
    for kind, coeffs, D in sorted(lvl2, key=lambda t: t[0]):
        written.append(NewformData(2, 30, f"2.30.a.{next(labels)}", tuple(coeffs), None, "file", D, 1))

    for fm in written:
        rep = validate_hecke(fm)
        if not rep.ok:
            raise SystemExit(f"{fm.label}: Hecke validation failed: {rep.failures[:3]}")
        save_newform(fm, out / f"{fm.label}.json")
        log.info("wrote %s (%d coefficients, %s)", fm.label, fm.coeff_cutoff, rep.summary())


if __name__ == "__main__":
    main()
