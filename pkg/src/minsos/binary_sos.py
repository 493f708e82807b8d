"""Sums of two squares of binary forms via complex root pairing.

A nonnegative binary form factors as c * R^2 * prod_j (q_j qbar_j)^(mu_j)
with R collecting the real roots (necessarily of even multiplicity) and the
q_j the conjugate-pair factors.  Every representation f = p^2 + q^2 arises
from pi = sqrt(c) * R * (one root chosen from each conjugate pair, counted
with multiplicity) as p = Re pi, q = Im pi; choices are counted modulo
global conjugation.  For 2d simple complex roots this gives 2^(d-1)
inequivalent representations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .biform import BinaryForm
from .errors import NotNonnegative
from .gram import Representation, equivalent
from .surfaces import MonomialBasis, projective_roots

PAIR_TOL = 1e-8  # conjugate pairing tolerance


def rnc_basis(d):
    """Monomial basis s^i t^(d-i), i = 0..d, of the rational normal curve."""
    return MonomialBasis(
        tuple((i, d - i) for i in range(d + 1)), 2, ("s", "t")
    )


@dataclass
class RootMultiset:
    """Projective roots of a real binary form, conjugate-closed.

    real_roots holds (value, multiplicity) with exactly real values; pairs
    holds one representative (Im > 0) per conjugate pair.  lead is the
    coefficient of the highest s-power; inf_mult the multiplicity of the
    root at infinity.
    """

    degree: int
    lead: float
    inf_mult: int
    real_roots: list
    pairs: list

    def total(self):
        return (
            self.inf_mult
            + sum(m for _, m in self.real_roots)
            + 2 * sum(m for _, m in self.pairs)
        )

    def entries(self):
        """Flat conjugate-closed list of (root or "inf", multiplicity)."""
        out = []
        if self.inf_mult:
            out.append(("inf", self.inf_mult))
        for value, mult in self.real_roots:
            out.append((complex(value), mult))
        for value, mult in self.pairs:
            out.append((value, mult))
            out.append((value.conjugate(), mult))
        return out

    def to_json(self):
        return {
            "degree": self.degree,
            "lead": self.lead,
            "infMult": self.inf_mult,
            "realRoots": [[float(v.real), int(m)] for v, m in self.real_roots],
            "pairs": [
                [[float(v.real), float(v.imag)], int(m)] for v, m in self.pairs
            ],
        }


def _polish_root(poly, dpoly, r, iters=4):
    for _ in range(iters):
        d = np.polyval(dpoly, r)
        if d == 0:
            break
        step = np.polyval(poly, r) / d
        r = r - step
        if abs(step) <= 1e-15 * (1.0 + abs(r)):
            break
    return r


def roots(f, cluster_radius=1e-6):
    """Root multiset of a real binary form, Newton-polished and paired.

    Simple roots are polished on the dehomogenization; conjugate symmetry
    is enforced by matching roots to their conjugates within PAIR_TOL
    (relative) and averaging.
    """
    if f.is_zero():
        raise ValueError("the zero form has no root multiset")
    coeffs = [complex(c) for c in f.coeffs]
    if any(abs(c.imag) != 0 for c in coeffs):
        raise ValueError("root pairing requires real coefficients")
    sdeg = f.s_degree()
    lead = coeffs[sdeg].real
    clusters = projective_roots(f, cluster_radius)
    inf_mult = 0
    finite = []
    poly = np.array([c.real for c in coeffs[: sdeg + 1]][::-1])
    dpoly = np.polyder(poly) if len(poly) > 1 else np.array([0.0])
    for root, mult in clusters:
        if root == "inf":
            inf_mult = mult
            continue
        if mult == 1:
            root = _polish_root(poly, dpoly, root)
        finite.append((complex(root), mult))
    scale = max([1.0] + [abs(r) for r, _ in finite])
    real_roots = []
    rest = []
    for root, mult in finite:
        if abs(root.imag) <= PAIR_TOL * scale:
            real_roots.append((complex(root.real), mult))
        else:
            rest.append((root, mult))
    pairs = []
    used = [False] * len(rest)
    for i, (root, mult) in enumerate(rest):
        if used[i] or root.imag < 0:
            continue
        used[i] = True
        partner = None
        best = PAIR_TOL * scale
        for j, (other, omult) in enumerate(rest):
            if used[j] or omult != mult:
                continue
            gap = abs(other - root.conjugate())
            if gap <= best:
                best = gap
                partner = j
        if partner is None:
            raise ValueError(
                "no conjugate partner for root %r (imag %g)" % (root, root.imag)
            )
        used[partner] = True
        value = (root + rest[partner][0].conjugate()) / 2.0
        pairs.append((value, mult))
    if any(not u for u in used):
        raise ValueError("conjugate pairing failed")
    real_roots.sort(key=lambda rm: rm[0].real)
    pairs.sort(key=lambda rm: (rm[0].real, rm[0].imag))
    return RootMultiset(
        degree=f.deg,
        lead=float(lead),
        inf_mult=inf_mult,
        real_roots=real_roots,
        pairs=pairs,
    )


def is_nonnegative(f, cluster_radius=1e-6):
    """True iff the real binary form f is nonnegative on R^2.

    Every real root (including infinity) must have even multiplicity and
    the sign at a non-root sample point must be positive.
    """
    if f.is_zero():
        return True
    if f.deg % 2 == 1:
        return False
    rm = roots(f, cluster_radius)
    if rm.inf_mult % 2 == 1:
        return False
    if any(mult % 2 == 1 for _, mult in rm.real_roots):
        return False
    # all real roots have even multiplicity, so one sample sign decides
    s0 = 1.0 + 2.0 * max([0.0] + [abs(v) for v, _ in rm.real_roots])
    val = complex(f.eval(s0, 1.0)).real
    if val == 0.0:  # the sample accidentally hit a root; nudge it
        val = complex(f.eval(s0 + 0.375, 1.0)).real
    return val > 0.0


def _homogenize(poly_desc, deg):
    """Binary form of degree deg from descending s-poly coefficients."""
    sdeg = len(poly_desc) - 1
    coeffs = [0.0] * (deg + 1)
    for j, coeff in enumerate(poly_desc):
        coeffs[sdeg - j] = coeff
    return coeffs


def _representation_from_pq(p_coeffs, q_coeffs, d, signs=(1, 1)):
    basis = rnc_basis(d)
    vectors = [
        [float(c) for c in p_coeffs],
        [float(c) for c in q_coeffs],
    ]
    return Representation(basis=basis, vectors=vectors, signs=list(signs), exact=False)


def rep_forms(rep):
    """The two binary forms (p, q) of a two-squares Representation."""
    d = len(rep.basis) - 1
    return tuple(BinaryForm([float(c) for c in vec], d) for vec in rep.vectors)


def _dedup(reps, tol=1e-8):
    kept = []
    for rep in reps:
        if not any(equivalent(rep, other, tol) for other in kept):
            kept.append(rep)
    return kept


def enumerate_two_squares(f, cluster_radius=1e-6):
    """All inequivalent representations f = p^2 + q^2 of a nonnegative form.

    Returns Representations over the basis s^i t^(d-i) with two vectors
    (p, q) each, deduplicated by the canonical Gram matrix.  Multiplicities
    are enumerated exhaustively, so the count is exact for simple complex
    roots (2^(#pairs - 1)) and a complete dedup otherwise.

    Raises NotNonnegative when f is not nonnegative.
    """
    if f.is_zero():
        raise ValueError("the zero form has degenerate representations")
    if not is_nonnegative(f, cluster_radius):
        raise NotNonnegative("the form takes negative values")
    rm = roots(f, cluster_radius)
    d = f.deg // 2
    sqrt_c = float(np.sqrt(rm.lead))
    # common real factor: real roots and infinity contribute half powers
    common = np.array([1.0 + 0.0j])
    for value, mult in rm.real_roots:
        for _ in range(mult // 2):
            common = np.convolve(common, np.array([1.0, -value]))
    reps = []
    choices = [range(mult + 1) for _, mult in rm.pairs]
    for assign in itertools.product(*choices):
        pi = common.astype(np.complex128)
        for (value, mult), a in zip(rm.pairs, assign):
            for _ in range(a):
                pi = np.convolve(pi, np.array([1.0, -value]))
            for _ in range(mult - a):
                pi = np.convolve(pi, np.array([1.0, -value.conjugate()]))
        pi = sqrt_c * pi
        coeffs = _homogenize(pi, d)  # t^(inf_mult/2) fills the top slots
        p = [c.real for c in coeffs]
        q = [c.imag for c in coeffs]
        reps.append(_representation_from_pq(p, q, d))
    return _dedup(reps)


def two_squares_residual(f, rep):
    """max |coefficient of f - p^2 - q^2| for a two-squares representation."""
    p, q = rep_forms(rep)
    fc = f.to_complex()
    diff = fc - (p * p) - (q * q)
    return float(diff.max_abs_coeff())


@dataclass
class PairingClass:
    """One unordered balanced split of the root multiset into two factors."""

    side_a: tuple  # (entry index, count) pairs
    side_b: tuple
    kind: str  # "psd", "indefinite", "nsd", or "complex"

    @property
    def is_real(self):
        return self.kind != "complex"


@dataclass
class RankTwoReport:
    """Census of all rank <= 2 factorizations f = u * v with deg u = deg v."""

    counts: dict
    classes: list

    def to_json(self):
        return {
            "counts": dict(self.counts),
            "classes": [
                {"sideA": list(c.side_a), "sideB": list(c.side_b), "kind": c.kind}
                for c in self.classes
            ],
        }


def enumerate_rank_two(f, cluster_radius=1e-6):
    """Classify all balanced factor pairs {u, v} of a real binary form.

    Each class corresponds to a rank <= 2 complex Gram matrix of f over the
    rational normal curve basis.  A class is real when the unordered pair is
    conjugation-stable: either both factors are real (an indefinite Gram) or
    they are conjugate (a definite one, psd for positive leading scale).
    For a squarefree form of degree 2d this yields binom(2d, d)/2 classes.
    """
    rm = roots(f, cluster_radius)
    if rm.degree % 2 == 1:
        raise ValueError("balanced splits need even degree")
    d = rm.degree // 2
    entries = rm.entries()
    nent = len(entries)
    # conjugation as a permutation of entry indices
    conj = list(range(nent))
    scale = max(
        [1.0] + [abs(r) for r, _ in entries if r != "inf"]
    )
    for i, (root, _) in enumerate(entries):
        if root == "inf":
            conj[i] = i
            continue
        target = root.conjugate()
        for j, (other, _) in enumerate(entries):
            if other != "inf" and abs(other - target) <= PAIR_TOL * scale:
                conj[i] = j
                break
    mults = [m for _, m in entries]
    seen = set()
    classes = []
    counts = {"complex": 0, "real": 0, "psd": 0, "indefinite": 0, "nsd": 0}
    for vec in _bounded_vectors(mults, d):
        comp = tuple(m - v for m, v in zip(mults, vec))
        key = min(vec, comp)
        if key in seen:
            continue
        seen.add(key)
        conj_vec = tuple(vec[conj[i]] for i in range(nent))
        if conj_vec == vec:
            # both factors real: a difference of squares
            kind = "indefinite"
        elif conj_vec == comp:
            kind = "psd" if rm.lead > 0 else "nsd"
        else:
            kind = "complex"
        side_a = tuple((i, v) for i, v in enumerate(vec) if v)
        side_b = tuple((i, v) for i, v in enumerate(comp) if v)
        classes.append(PairingClass(side_a=side_a, side_b=side_b, kind=kind))
        counts["complex"] += 1
        if kind != "complex":
            counts["real"] += 1
            counts[kind if kind != "nsd" else "nsd"] += 1
    return RankTwoReport(counts=counts, classes=classes)


def class_representation(f, cls, rm=None, cluster_radius=1e-6):
    """Signed rank <= 2 representation realizing a real pairing class.

    Conjugate classes give f = p^2 + q^2 (or the negative for nsd); both-real
    classes give the difference of squares f = ((u+v)/2)^2 - ((u-v)/2)^2
    built from the two real factors u, v.
    """
    if cls.kind == "complex":
        raise ValueError("only conjugation-stable classes have real Gram points")
    if rm is None:
        rm = roots(f, cluster_radius)
    entries = rm.entries()
    d = rm.degree // 2

    def side_poly(side):
        pi = np.array([1.0 + 0.0j])
        for idx, count in side:
            root, _ = entries[idx]
            if root == "inf":
                continue  # the homogenization supplies the t factors
            for _ in range(count):
                pi = np.convolve(pi, np.array([1.0, -root]))
        return pi

    ua = side_poly(cls.side_a)
    if cls.kind in ("psd", "nsd"):
        pi = np.sqrt(abs(rm.lead)) * ua
        coeffs = _homogenize(pi, d)
        p = [c.real for c in coeffs]
        q = [c.imag for c in coeffs]
        sign = 1 if cls.kind == "psd" else -1
        return _representation_from_pq(p, q, d, signs=(sign, sign))
    vb = side_poly(cls.side_b)
    u = _homogenize(rm.lead * ua, d)
    v = _homogenize(vb, d)
    p = [((x + y) / 2.0).real for x, y in zip(u, v)]
    q = [((x - y) / 2.0).real for x, y in zip(u, v)]
    return _representation_from_pq(p, q, d, signs=(1, -1))


def _bounded_vectors(bounds, total):
    """All integer vectors 0 <= v_i <= bounds_i with sum(v) = total."""
    n = len(bounds)

    def rec(i, remaining):
        if i == n:
            if remaining == 0:
                yield ()
            return
        tail_cap = sum(bounds[i + 1 :])
        lo = max(0, remaining - tail_cap)
        hi = min(bounds[i], remaining)
        for v in range(lo, hi + 1):
            for rest in rec(i + 1, remaining - v):
                yield (v,) + rest

    return rec(0, total)
