"""Apex reduction for quadratic forms on the cone over a rational normal curve.

Writing f = a * apex^2 + 2 * apex * b + c with a scalar and b, c pulled back
from the base curve, the Schur complement g = c - b^2/a is a quadratic form
on the base, and every representation of g lifts to one of f by prepending
the square (sqrt(a) * apex + b/sqrt(a))^2.  The lift raises the rank by
exactly one and preserves reality and positive semidefiniteness, so rank-3
points on the cone are enumerated through rank-2 points on the curve.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .binary_sos import (
    class_representation,
    enumerate_rank_two,
    enumerate_two_squares,
    roots as binary_roots,
)
from .biform import RATIONAL, BinaryForm
from .enumerator import CountReport, expected_counts
from .errors import ApexCoefficientNotPositive, DimensionMismatch, NotAScroll
from .gram import (
    Representation,
    build_gram_space,
    inertia,
    verify_representation,
)
from .surfaces import (
    CONE_RNC,
    cone_rnc,
    genericity_check,
    monomial_basis,
    quadratic_form_blocks,
)


def _require_cone(spec):
    if spec.kind != CONE_RNC:
        raise NotAScroll("apex reduction applies to cones over rational normal curves")


def split(f, spec):
    """Decompose f = a * apex^2 + 2 * apex * b + c on the cone.

    Returns (a, b, c) with a a scalar, b a BinaryForm of degree d and c one
    of degree 2d, by coefficient extraction in the apex variable.  Exact for
    rational input.

    Raises ApexCoefficientNotPositive when a <= 0 (f is then not positive
    along the apex direction).
    """
    _require_cone(spec)
    d = spec.d
    a_form, b_form, c_form = quadratic_form_blocks(f, spec)
    b = b_form.divide_t_power(d)
    a_poly = a_form.divide_t_power(2 * d)
    a = a_poly.coeffs[0] if a_poly.coeffs else 0
    if isinstance(a, complex):
        if abs(a.imag) > 1e-12 * max(1.0, abs(a)):
            raise ApexCoefficientNotPositive("apex coefficient %r is not real" % (a,))
        a = a.real
    if not (a > 0):
        raise ApexCoefficientNotPositive(
            "apex coefficient %r is not positive" % (a,)
        )
    return a, b, c_form


def reduce_form(f, spec):
    """The Schur complement g = c - b^2/a on the base curve (degree 2d)."""
    a, b, c = split(f, spec)
    if b.field == RATIONAL and isinstance(a, (int, Fraction)):
        scaled = (b * b).scale(Fraction(1, 1) / Fraction(a))
    else:
        scaled = (b * b).scale(1.0 / float(a))
        c = c.to_complex()
    return c - scaled


def _exact_sqrt(a):
    """Rational square root of a positive rational, or None."""
    a = Fraction(a)
    num, den = a.numerator, a.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def lift(rep, a, b):
    """Lift a representation of g = c - b^2/a on the base to one of f.

    Prepends the square of sqrt(a) * apex + b/sqrt(a) over the cone basis
    (base block first, apex last) and pushes each base form w to its
    pullback apex-free form.  Rank increases by exactly one; signs, reality
    and psd-ness are preserved.  Exact when rep is exact and a is a rational
    perfect square.
    """
    d = len(rep.basis) - 1
    if b.deg != d:
        raise DimensionMismatch("cross term degree %d != base degree %d" % (b.deg, d))
    basis = monomial_basis(cone_rnc(d), 1)
    root = _exact_sqrt(a) if isinstance(a, (int, Fraction)) else None
    exact = rep.exact and root is not None and b.field == RATIONAL
    if exact:
        sqrt_a = root
        apex_vec = [coeff / sqrt_a for coeff in b.coeffs] + [sqrt_a]
        vectors = [[Fraction(c) for c in vec] + [Fraction(0)] for vec in rep.vectors]
    else:
        sqrt_a = float(np.sqrt(float(a)))
        # complex-typed b still encodes a real form; the final verification
        # against f catches any genuinely complex input
        apex_vec = [complex(coeff).real / sqrt_a for coeff in b.coeffs] + [sqrt_a]
        vectors = [[float(c) for c in vec] + [0.0] for vec in rep.vectors]
    return Representation(
        basis=basis,
        vectors=[apex_vec] + vectors,
        signs=[1] + list(rep.signs),
        exact=exact,
    )


def schur_reduce_gram(G, d):
    """Base Gram matrix G' = C - u u^T / a from a cone Gram matrix.

    The cone basis has the apex last: G = [[C, u], [u^T, a]] in block form.
    Exact over Fractions, float otherwise.
    """
    n = d + 2
    if isinstance(G, np.ndarray):
        if G.shape != (n, n):
            raise DimensionMismatch("expected a %d x %d Gram matrix" % (n, n))
        a = G[n - 1, n - 1]
        if not (a > 0):
            raise ApexCoefficientNotPositive("apex entry %r is not positive" % (a,))
        u = G[: n - 1, n - 1]
        return G[: n - 1, : n - 1] - np.outer(u, u) / a
    a = Fraction(G[n - 1][n - 1])
    if not (a > 0):
        raise ApexCoefficientNotPositive("apex entry %r is not positive" % (a,))
    out = []
    for i in range(n - 1):
        row = []
        for j in range(n - 1):
            row.append(Fraction(G[i][j]) - Fraction(G[i][n - 1]) * Fraction(G[j][n - 1]) / a)
        out.append(row)
    return out


def lift_gram(Gp, a, b):
    """Inverse of schur_reduce_gram on Gram matrices of g = c - b^2/a."""
    d = b.deg
    n = d + 2
    if isinstance(Gp, np.ndarray):
        G = np.zeros((n, n))
        af = float(a)
        u = np.array([float(c) for c in b.coeffs])
        G[: n - 1, : n - 1] = Gp + np.outer(u, u) / af
        G[: n - 1, n - 1] = u
        G[n - 1, : n - 1] = u
        G[n - 1, n - 1] = af
        return G
    a = Fraction(a)
    u = [Fraction(c) for c in b.coeffs]
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1):
        for j in range(n - 1):
            G[i][j] = Fraction(Gp[i][j]) + u[i] * u[j] / a
        G[i][n - 1] = u[i]
        G[n - 1][i] = u[i]
    G[n - 1][n - 1] = a
    return G


def enumerate_cone(f, spec, cluster_radius=1e-6):
    """Classify all rank-3 Gram matrices of f on a cone via apex reduction.

    The complex census enumerates balanced factor pairs of the reduced form;
    real classes are realized as signed rank <= 2 representations, lifted,
    and classified by inertia of the lifted Gram matrix.  Every emitted
    representation is re-verified against f.
    """
    _require_cone(spec)
    space = build_gram_space(f, spec)
    a, b, c = split(f, spec)
    g = reduce_form(f, spec)
    gfloat = g.to_complex() if g.field == RATIONAL else g
    rm = binary_roots(gfloat, cluster_radius)
    census = enumerate_rank_two(gfloat, cluster_radius)
    counts = {
        "complex": census.counts["complex"],
        "real": census.counts["real"],
        "psd": 0,
        "indefinite": 0,
    }
    entries = []
    for cls in census.classes:
        if cls.kind == "complex":
            continue
        base_rep = class_representation(gfloat, cls, rm=rm)
        lifted = lift(base_rep, a, b)
        G = lifted.gram()
        ine = inertia(G)
        psd = ine[1] == 0
        counts["psd" if psd else "indefinite"] += 1
        entry = {
            "theta": space.fiber_coordinates(G),
            "inertia": ine,
            "psd": psd,
            "representation": lifted,
            "verify_residual": float(verify_representation(f, lifted)),
        }
        entries.append(entry)
    report = genericity_check(f, spec, cluster_radius)
    report.mark_observed_count(counts["complex"])
    warning = report.enumeration_warning
    notes = ["enumerated through the apex reduction to the base curve"]
    if report.delta_squarefree is False:
        notes.append("discriminant is not squarefree")
    notes.extend(report.notes)
    expected = expected_counts(spec)
    if counts["psd"] != 0:
        two_sq = enumerate_two_squares(gfloat, cluster_radius)
        if len(two_sq) != counts["psd"]:
            notes.append(
                "two-squares census mismatch: %d vs %d psd classes"
                % (len(two_sq), counts["psd"])
            )
    return CountReport(
        counts=counts,
        expected=expected,
        warning=warning,
        entries=entries,
        path_stats={},
        notes=notes,
    )
