"""Surfaces of minimal degree as combinatorial objects.

Three kinds are supported: rational normal scrolls Scroll(d, e) (from the
trapezoid with vertices (0,0), (0,1), (d,0), (e,1)), the Veronese surface in
P^5, and the cone over a rational normal curve.  The module provides their
monomial bases, genus and degree bookkeeping, discriminants of quadratic
forms, and genericity diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np

from .biform import RATIONAL, Biform, BinaryForm, binary_gcd
from .errors import DegreeMismatch, NotAScroll, UnsupportedDegree

SCROLL = "scroll"
VERONESE = "veronese"
CONE_RNC = "cone_rnc"


@dataclass(frozen=True)
class SurfaceSpec:
    """A surface of minimal degree, identified combinatorially."""

    kind: str
    d: int = 0
    e: int = 0

    def __post_init__(self):
        if self.kind == SCROLL:
            if not (self.d >= self.e >= 1):
                raise DegreeMismatch(
                    "scroll needs d >= e >= 1, got (%d, %d)" % (self.d, self.e)
                )
        elif self.kind == VERONESE:
            pass
        elif self.kind == CONE_RNC:
            if self.d < 2:
                raise DegreeMismatch("cone needs curve degree >= 2, got %d" % self.d)
        else:
            raise DegreeMismatch("unknown surface kind %r" % (self.kind,))

    # -- derived data -----------------------------------------------------

    @property
    def ambient_dim(self):
        if self.kind == SCROLL:
            return self.d + self.e + 1
        if self.kind == VERONESE:
            return 5
        return self.d + 1

    @property
    def dim(self):
        return 2

    @property
    def codim(self):
        return self.ambient_dim - 2

    @property
    def degree(self):
        # minimal degree: deg(X) = codim(X) + 1
        return self.codim + 1

    @property
    def genus(self):
        """Genus of the curve cut by a generic quadratic form (scrolls only)."""
        if self.kind != SCROLL:
            raise NotAScroll("genus formula implemented for scrolls only")
        return self.d + self.e - 1

    @property
    def ruling_heights(self):
        """(d, e) for scrolls, (d, 0) for cones (apex block has height 0)."""
        if self.kind == SCROLL:
            return (self.d, self.e)
        if self.kind == CONE_RNC:
            return (self.d, 0)
        raise NotAScroll("no ruling for the Veronese surface")

    def __str__(self):
        if self.kind == SCROLL:
            return "scroll(%d,%d)" % (self.d, self.e)
        if self.kind == VERONESE:
            return "veronese"
        return "cone_rnc(%d)" % self.d

    def to_json(self):
        if self.kind == SCROLL:
            return {"kind": SCROLL, "d": self.d, "e": self.e}
        if self.kind == VERONESE:
            return {"kind": VERONESE}
        return {"kind": CONE_RNC, "d": self.d}

    @classmethod
    def from_json(cls, data):
        kind = data.get("kind")
        if kind == SCROLL:
            return cls(SCROLL, int(data["d"]), int(data["e"]))
        if kind == VERONESE:
            return cls(VERONESE)
        if kind == CONE_RNC:
            return cls(CONE_RNC, int(data["d"]))
        raise DegreeMismatch("unknown surface kind %r" % (kind,))


def scroll(d, e):
    return SurfaceSpec(SCROLL, d, e)


def veronese():
    return SurfaceSpec(VERONESE)


def cone_rnc(d):
    return SurfaceSpec(CONE_RNC, d)


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered list of monomial exponent tuples spanning a graded piece."""

    monomials: tuple
    nvars: int
    var_names: tuple

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __getitem__(self, idx):
        return self.monomials[idx]

    def index(self, monomial):
        return self.monomials.index(tuple(monomial))

    def label(self, idx):
        expo = self.monomials[idx]
        parts = []
        for name, e in zip(self.var_names, expo):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append("%s^%d" % (name, e))
        return "*".join(parts) if parts else "1"


def _scroll_like_basis(d, e, k):
    """Basis of R[X]_k for the trapezoid with heights (d, e); e = 0 for cones.

    Degree one: the y-block y s^i t^(d-i) for i = 0..d, then the x-block
    x s^i t^(d-i) for i = 0..e (all of bidegree (d, 1)).  Degree two: lattice
    points of the doubled trapezoid, bihomogenized to bidegree (2d, 2).
    """
    monos = []
    if k == 1:
        for i in range(d + 1):
            monos.append((i, d - i, 0, 1))
        for i in range(e + 1):
            monos.append((i, d - i, 1, 0))
    else:
        for q in range(3):
            top = 2 * d - q * (d - e)
            for p in range(top + 1):
                monos.append((p, 2 * d - p, q, 2 - q))
    return MonomialBasis(tuple(monos), 4, ("s", "t", "x", "y"))


def _veronese_basis(k):
    """Ternary monomials of degree 2k in (u, v, w), reverse-lex order."""
    deg = 2 * k
    monos = []
    for a in range(deg, -1, -1):
        for b in range(deg - a, -1, -1):
            monos.append((a, b, deg - a - b))
    return MonomialBasis(tuple(monos), 3, ("u", "v", "w"))


def monomial_basis(spec, k):
    """Monomial basis of R[X]_k for k in {1, 2}."""
    if k not in (1, 2):
        raise UnsupportedDegree("only the graded pieces k = 1, 2 are available")
    if spec.kind == VERONESE:
        return _veronese_basis(k)
    d, e = spec.ruling_heights
    return _scroll_like_basis(d, e, k)


def hilbert_data(spec):
    """(genus, curve degree, Ehrhart coefficients) for a scroll.

    The Ehrhart polynomial of the trapezoid is
    (d+e)/2 * T^2 + (d+e+2)/2 * T + 1.
    """
    if spec.kind != SCROLL:
        raise NotAScroll("hilbert_data requires a scroll")
    d, e = spec.d, spec.e
    coeffs = (Fraction(d + e, 2), Fraction(d + e + 2, 2), Fraction(1))
    return (d + e - 1, 2 * (d + e), coeffs)


def quadratic_form_blocks(f, spec):
    """Split a quadratic form f = a x^2 + 2 b xy + c y^2 on a scroll or cone.

    Returns BinaryForms (a, b, c) of degree 2d and checks the divisibility
    pattern: a divisible by t^(2(d-e)) and b by t^(d-e).
    """
    if spec.kind == VERONESE:
        raise NotAScroll("no (x, y) block structure on the Veronese surface")
    d, e = spec.ruling_heights
    if f.bidegree != (2 * d, 2):
        raise DegreeMismatch(
            "expected bidegree (%d, 2), got %r" % (2 * d, f.bidegree)
        )
    a, b, c = f.xy_blocks()
    gap = d - e
    if a.t_valuation() < 2 * gap:
        raise DegreeMismatch("x^2 coefficient not divisible by t^%d" % (2 * gap))
    if b.t_valuation() < gap:
        raise DegreeMismatch("xy coefficient not divisible by t^%d" % gap)
    return a, b, c


def discriminant(f, spec):
    """Discriminant Delta = b^2 - ac of a quadratic form, normalized.

    The forced factor t^(2(d-e)) is divided out, leaving a binary form of
    degree 2(d+e).  Only the root set matters for the diagnostics; the sign
    convention makes Delta <= 0 on the reals for nonnegative f.
    """
    a, b, c = quadratic_form_blocks(f, spec)
    d, e = spec.ruling_heights
    raw = b * b - a * c
    return raw.divide_t_power(2 * (d - e))


def _squarefree_exact(g):
    """Exact squarefreeness of a rational binary form via gcd of partials."""
    if g.is_zero():
        return False
    gs = g.diff_s()
    gt = BinaryForm(
        [(g.deg - i) * g.coeffs[i] for i in range(g.deg)], g.deg - 1
    )
    if gs.is_zero() or gt.is_zero():
        # happens only for g = c*s^deg or c*t^deg with deg >= 2
        return g.deg <= 1
    return binary_gcd(gs, gt).deg == 0


def projective_roots(g, cluster_radius=1e-6):
    """Numeric projective roots of a binary form with multiplicities.

    Returns a list of (root, multiplicity) where root is a complex number
    (value of s/t) or the string "inf" for the root at infinity.
    """
    coeffs = [complex(c) for c in g.coeffs]
    out = []
    inf_mult = g.deg - g.s_degree()
    if g.s_degree() < 0:
        raise ValueError("zero form has no root set")
    if inf_mult > 0:
        out.append(("inf", inf_mult))
    poly = coeffs[: g.s_degree() + 1]
    if len(poly) > 1:
        roots = np.roots(poly[::-1])
        scale = max(1.0, max(abs(r) for r in roots))
        used = [False] * len(roots)
        for i, r in enumerate(roots):
            if used[i]:
                continue
            cluster = [r]
            used[i] = True
            for j in range(i + 1, len(roots)):
                if not used[j] and abs(roots[j] - r) <= cluster_radius * scale:
                    cluster.append(roots[j])
                    used[j] = True
            out.append((complex(np.mean(cluster)), len(cluster)))
    return out


def _squarefree_numeric(g, cluster_radius=1e-6):
    if g.is_zero():
        return False
    return all(mult == 1 for _, mult in projective_roots(g, cluster_radius))


def binary_squarefree(g, cluster_radius=1e-6):
    if g.field == RATIONAL:
        return _squarefree_exact(g)
    return _squarefree_numeric(g, cluster_radius)


@dataclass
class GenericityReport:
    """Diagnostics for the genericity of a quadratic form on a surface.

    delta_squarefree and curve_smooth are None when the discriminant theory
    does not apply (Veronese surface).  enumeration_warning is filled post
    hoc by the rank enumerator when the observed complex count falls short
    of the generic one.
    """

    surface: SurfaceSpec
    delta_squarefree: bool | None = None
    curve_smooth: bool | None = None
    expected_complex: int | None = None
    enumeration_warning: str | None = None
    notes: list = dataclass_field(default_factory=list)

    @property
    def generic_so_far(self):
        flags = [self.delta_squarefree]
        return all(f for f in flags if f is not None) and (
            self.enumeration_warning is None
        )

    def mark_observed_count(self, observed):
        if self.expected_complex is not None and observed < self.expected_complex:
            self.enumeration_warning = (
                "non-generic form: %d rank-3 Gram matrices found, expected %d"
                % (observed, self.expected_complex)
            )
        return self.enumeration_warning

    def to_json(self):
        return {
            "surface": self.surface.to_json(),
            "deltaSquarefree": self.delta_squarefree,
            "curveSmooth": self.curve_smooth,
            "expectedComplex": self.expected_complex,
            "warning": self.enumeration_warning,
            "notes": list(self.notes),
        }


def genericity_check(f, spec, cluster_radius=1e-6):
    """Genericity diagnostics for a quadratic form.

    For scrolls and cones: (i) squarefreeness of the normalized discriminant
    (exact gcd in rational mode, root clustering in float mode), and (ii)
    smoothness of the curve V(f) in P^1 x P^1, which is equivalent to
    squarefreeness of the raw discriminant b^2 - ac including its forced
    t-power (a multiple branch point or a degenerate fiber is exactly a
    singular point of the double cover).
    """
    report = GenericityReport(surface=spec)
    if spec.kind == VERONESE:
        report.expected_complex = 63
        report.notes.append("discriminant diagnostics undefined for the Veronese")
        return report
    try:
        a, b, c = quadratic_form_blocks(f, spec)
    except DegreeMismatch as exc:
        report.notes.append("block structure violated: %s" % exc)
        return report
    raw = b * b - a * c
    delta = discriminant(f, spec)
    if delta.is_zero():
        report.delta_squarefree = False
        report.curve_smooth = False
        report.notes.append("identically zero discriminant (f is a square)")
        return report
    report.delta_squarefree = binary_squarefree(delta, cluster_radius)
    report.curve_smooth = binary_squarefree(raw, cluster_radius)
    if spec.kind == SCROLL:
        report.expected_complex = 4 ** spec.genus
    else:
        # cone over the degree-d rational normal curve: pairings of 2d roots
        from math import comb

        report.expected_complex = comb(2 * spec.d, spec.d) // 2
    return report
