"""Gram matrices of quadratic forms on surfaces of minimal degree.

The affine space of Gram matrices of a form f over a monomial basis m is
{G : m^T G m = f}; it is computed exactly over the rationals as a particular
solution G0 plus a kernel basis K_1..K_k.  Rank-r points of this space are
exactly the representations of f as a signed sum of r squares, extracted
here by eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .biform import COMPLEX, RATIONAL, Biform, TermPoly
from .errors import (
    DimensionMismatch,
    NonSymmetric,
    NotAQuadraticForm,
    NotInFiber,
)
from .exact_linalg import solve_affine
from .surfaces import MonomialBasis, monomial_basis

# eigenvalue thresholds, exposed as module config
RANK_TOL = 1e-8
PSD_TOL = 1e-8
FIBER_TOL = 1e-8


def _form_terms(form):
    """Exponent-map view of a Biform or TermPoly with rational coefficients."""
    if isinstance(form, Biform):
        terms, nvars, field = form.terms, 4, form.field
    elif isinstance(form, TermPoly):
        terms, nvars, field = form.terms, form.nvars, form.field
    else:
        raise NotAQuadraticForm("unsupported form type %r" % type(form).__name__)
    if field == COMPLEX:
        out = {}
        for expo, coeff in terms.items():
            if abs(coeff.imag) > 0:
                raise NotAQuadraticForm("form has non-real coefficients")
            out[expo] = Fraction(coeff.real)
        return out, nvars
    return dict(terms), nvars


@dataclass
class GramSpace:
    """Affine family G(theta) = G0 + sum theta_i K_i of Gram matrices."""

    basis: MonomialBasis
    form: object
    G0: list  # exact rational rows
    kernel: list  # list of exact rational matrices
    surface: object = None

    def __post_init__(self):
        n = len(self.basis)
        self.G0_f = np.array([[float(v) for v in row] for row in self.G0])
        self.kernel_f = np.array(
            [[[float(v) for v in row] for row in K] for K in self.kernel]
        ).reshape(len(self.kernel), n, n)

    @property
    def size(self):
        return len(self.basis)

    @property
    def kdim(self):
        return len(self.kernel)

    def gram_at(self, theta):
        """G(theta) as a numpy array (complex when theta is complex)."""
        theta = np.asarray(theta)
        if theta.shape != (self.kdim,):
            raise DimensionMismatch(
                "theta has shape %r, expected (%d,)" % (theta.shape, self.kdim)
            )
        if np.iscomplexobj(theta):
            G = self.G0_f.astype(np.complex128)
        else:
            G = self.G0_f.copy()
        for i in range(self.kdim):
            G += theta[i] * self.kernel_f[i]
        return G

    def gram_at_exact(self, theta):
        """G(theta) as exact rational rows; theta entries must be rational."""
        if len(theta) != self.kdim:
            raise DimensionMismatch("theta length %d != k = %d" % (len(theta), self.kdim))
        n = self.size
        G = [[Fraction(v) for v in row] for row in self.G0]
        for t, K in zip(theta, self.kernel):
            t = Fraction(t)
            for a in range(n):
                for b in range(n):
                    G[a][b] += t * K[a][b]
        return G

    def expand_gram(self, G):
        """Coefficients of m^T G m as a map from exponent tuples."""
        n = self.size
        monos = self.basis.monomials
        out = {}
        for a in range(n):
            for b in range(a, n):
                entry = G[a][b] if not isinstance(G, np.ndarray) else G[a, b]
                if entry == 0:
                    continue
                mult = 1 if a == b else 2
                key = tuple(x + y for x, y in zip(monos[a], monos[b]))
                out[key] = out.get(key, 0) + mult * entry
        return {k: v for k, v in out.items() if v != 0}

    def fiber_residual(self, G):
        """max |coefficient of m^T G m - f| (exact zero for exact fiber points)."""
        form_terms, _ = _form_terms(self.form)
        got = self.expand_gram(G)
        keys = set(got) | set(form_terms)
        resid = 0
        for key in keys:
            diff = got.get(key, 0) - form_terms.get(key, 0)
            resid = max(resid, abs(diff))
        return resid

    def project_fiber(self, G):
        """Orthogonal (Frobenius) projection of a symmetric G onto the fiber."""
        Q = self._kernel_orthonormal()
        diff = np.asarray(G, dtype=float) - self.G0_f
        out = self.G0_f.copy()
        for i in range(Q.shape[0]):
            out += np.tensordot(Q[i], diff) * Q[i]
        return out

    def fiber_coordinates(self, G):
        """Least-squares theta with G approx G0 + sum theta_i K_i."""
        diff = (np.asarray(G, dtype=float) - self.G0_f).reshape(-1)
        A = self.kernel_f.reshape(self.kdim, -1).T
        theta, *_ = np.linalg.lstsq(A, diff, rcond=None)
        return theta

    def _kernel_orthonormal(self):
        if not hasattr(self, "_kernel_on"):
            k = self.kdim
            n = self.size
            flat = self.kernel_f.reshape(k, n * n)
            # QR on the transposed stack gives an orthonormal spanning set
            q, _ = np.linalg.qr(flat.T)
            self._kernel_on = q.T[:k].reshape(k, n, n)
        return self._kernel_on

    def form_norm(self):
        terms, _ = _form_terms(self.form)
        return max((abs(float(v)) for v in terms.values()), default=0.0)

    def to_json(self):
        def mat(rows):
            return [
                [{"num": v.numerator, "den": v.denominator} for v in row]
                for row in rows
            ]

        data = {
            "basis": [list(m) for m in self.basis.monomials],
            "varNames": list(self.basis.var_names),
            "k": self.kdim,
            "G0": mat(self.G0),
            "kernel": [mat(K) for K in self.kernel],
        }
        if self.surface is not None:
            data["surface"] = self.surface.to_json()
        if isinstance(self.form, (Biform, TermPoly)):
            data["form"] = self.form.to_json()
        return data


def gram_space_from_basis(form, basis, surface=None):
    """Solve m^T G m = f exactly for symmetric G over the given basis."""
    form_terms, nvars = _form_terms(form)
    if nvars != basis.nvars:
        raise NotAQuadraticForm("form arity %d != basis arity %d" % (nvars, basis.nvars))
    n = len(basis)
    monos = basis.monomials
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    pair_index = {p: i for i, p in enumerate(pairs)}
    # group basis products by the resulting monomial
    products = {}
    for a in range(n):
        for b in range(a, n):
            key = tuple(x + y for x, y in zip(monos[a], monos[b]))
            products.setdefault(key, []).append((a, b))
    unreachable = [key for key in form_terms if key not in products]
    if unreachable:
        raise NotAQuadraticForm(
            "form has monomials outside the doubled polytope: %r" % unreachable[:3]
        )
    rows = []
    rhs = []
    for key in sorted(products):
        row = [Fraction(0)] * len(pairs)
        for a, b in products[key]:
            row[pair_index[(a, b)]] = Fraction(1 if a == b else 2)
        rows.append(row)
        rhs.append(Fraction(form_terms.get(key, 0)))
    try:
        particular, null_basis = solve_affine(rows, rhs)
    except ValueError as exc:  # pragma: no cover - admissible forms are solvable
        raise NotAQuadraticForm(str(exc)) from None

    def unflatten(vec):
        M = [[Fraction(0)] * n for _ in range(n)]
        for (a, b), value in zip(pairs, vec):
            M[a][b] = value
            M[b][a] = value
        return M

    G0 = unflatten(particular)
    kernel = [unflatten(vec) for vec in null_basis]
    return GramSpace(basis=basis, form=form, G0=G0, kernel=kernel, surface=surface)


def build_gram_space(f, spec):
    """Gram space of a quadratic form on a surface of minimal degree."""
    basis = monomial_basis(spec, 1)
    return gram_space_from_basis(f, basis, surface=spec)


def inertia(G, tol=None):
    """(nPlus, nMinus, nZero) eigenvalue counts of a real symmetric matrix."""
    tol = RANK_TOL if tol is None else tol
    if isinstance(G, (list, tuple)):
        G = np.array([[float(v) for v in row] for row in G])
    G = np.asarray(G)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise NonSymmetric("inertia needs a square matrix")
    if np.iscomplexobj(G):
        if np.max(np.abs(G.imag)) > 0:
            raise NonSymmetric("inertia is defined for real symmetric matrices")
        G = G.real
    scale = max(1e-300, float(np.max(np.abs(G))))
    if np.max(np.abs(G - G.T)) > 1e-12 * scale:
        raise NonSymmetric("matrix is not symmetric")
    eigs = np.linalg.eigvalsh(0.5 * (G + G.T))
    smax = max(np.max(np.abs(eigs)), 1e-300)
    nplus = int(np.sum(eigs > tol * smax))
    nminus = int(np.sum(eigs < -tol * smax))
    return (nplus, nminus, len(eigs) - nplus - nminus)


def symmetric_rank(G, tol=None):
    """Numerical rank of a (possibly complex) symmetric matrix via SVD."""
    tol = RANK_TOL if tol is None else tol
    svals = np.linalg.svd(np.asarray(G, dtype=complex), compute_uv=False)
    if svals.size == 0 or svals[0] == 0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


@dataclass
class Representation:
    """Signed sum of squares f = sum_i sign_i * l_i^2.

    Forms are stored as coefficient vectors over the owning basis (exact
    rational lists or float arrays).  The canonical Gram matrix
    sum_i sign_i v_i v_i^T is the equivalence-class invariant.
    """

    basis: MonomialBasis
    vectors: list
    signs: list
    exact: bool = False

    def __post_init__(self):
        self.signs = [int(s) for s in self.signs]
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")
        if len(self.signs) != len(self.vectors):
            raise DimensionMismatch("one sign per form required")

    @property
    def nforms(self):
        return len(self.vectors)

    def gram(self):
        """Canonical Gram matrix (float)."""
        n = len(self.basis)
        G = np.zeros((n, n))
        for sign, vec in zip(self.signs, self.vectors):
            v = np.array([float(c) for c in vec])
            G += sign * np.outer(v, v)
        return G

    def gram_exact(self):
        if not self.exact:
            raise ValueError("representation is not exact")
        n = len(self.basis)
        G = [[Fraction(0)] * n for _ in range(n)]
        for sign, vec in zip(self.signs, self.vectors):
            for a in range(n):
                if vec[a] == 0:
                    continue
                for b in range(n):
                    G[a][b] += sign * vec[a] * vec[b]
        return G

    def is_psd(self):
        return all(s == 1 for s in self.signs)

    def expand(self):
        """Coefficient map of sum_i sign_i l_i^2 over exponent tuples."""
        out = {}
        monos = self.basis.monomials
        n = len(self.basis)
        for sign, vec in zip(self.signs, self.vectors):
            for a in range(n):
                va = vec[a]
                if va == 0:
                    continue
                for b in range(n):
                    vb = vec[b]
                    if vb == 0:
                        continue
                    key = tuple(x + y for x, y in zip(monos[a], monos[b]))
                    out[key] = out.get(key, 0) + sign * va * vb
        return {k: v for k, v in out.items() if v != 0}

    def forms_as_biforms(self):
        """The linear forms as Biforms (bases over (s,t,x,y) only)."""
        if self.basis.nvars != 4:
            raise NotAQuadraticForm("basis is not over (s, t, x, y)")
        out = []
        for vec in self.vectors:
            terms = {}
            deg_st = deg_xy = 0
            for mono, coeff in zip(self.basis.monomials, vec):
                i, j, k, l = mono
                deg_st, deg_xy = i + j, k + l
                if coeff != 0:
                    terms[mono] = (
                        Fraction(coeff) if self.exact else float(coeff)
                    )
            out.append(Biform(deg_st, deg_xy, terms))
        return out

    def to_json(self):
        def vec_json(vec):
            if self.exact:
                return [{"num": c.numerator, "den": c.denominator} for c in vec]
            return [float(c) for c in vec]

        return {
            "basis": [list(m) for m in self.basis.monomials],
            "varNames": list(self.basis.var_names),
            "vectors": [vec_json(v) for v in self.vectors],
            "signs": list(self.signs),
        }

    @classmethod
    def from_json(cls, data):
        monos = tuple(tuple(int(e) for e in m) for m in data["basis"])
        names = tuple(data["varNames"])
        basis = MonomialBasis(monos, len(names), names)
        vectors = []
        exact = True
        for raw in data["vectors"]:
            vec = []
            for c in raw:
                if isinstance(c, dict):
                    vec.append(Fraction(int(c["num"]), int(c.get("den", 1))))
                else:
                    vec.append(float(c))
                    exact = False
            vectors.append(vec)
        return cls(
            basis=basis,
            vectors=vectors,
            signs=[int(s) for s in data["signs"]],
            exact=exact,
        )


def representation_from_forms(basis, forms, signs=None):
    """Build a Representation from Biform linear forms over the basis."""
    index = {m: i for i, m in enumerate(basis.monomials)}
    vectors = []
    exact = True
    for form in forms:
        vec = [Fraction(0)] * len(basis)
        terms = form.terms if isinstance(form, (Biform, TermPoly)) else form
        for expo, coeff in terms.items():
            if expo not in index:
                raise NotAQuadraticForm("form monomial %r outside basis" % (expo,))
            if not isinstance(coeff, (int, Fraction)):
                exact = False
            vec[index[expo]] = coeff
        vectors.append(vec)
    if signs is None:
        signs = [1] * len(vectors)
    if not exact:
        vectors = [[float(c) for c in vec] for vec in vectors]
    return Representation(basis=basis, vectors=vectors, signs=list(signs), exact=exact)


def extract_representation(space, G, rank_tol=None, fiber_tol=None):
    """Signed linear forms from a real symmetric fiber point, by eigenpairs.

    Eigenvalues are sorted by descending absolute value; each kept form is
    sqrt(|lambda|) times its unit eigenvector with the first significant
    coefficient made positive.
    """
    rank_tol = RANK_TOL if rank_tol is None else rank_tol
    fiber_tol = FIBER_TOL if fiber_tol is None else fiber_tol
    if isinstance(G, (list, tuple)):
        G = np.array([[float(v) for v in row] for row in G])
    G = np.asarray(G)
    if np.iscomplexobj(G):
        if np.max(np.abs(G.imag)) > rank_tol * max(1.0, np.max(np.abs(G))):
            raise NonSymmetric("extraction needs a real symmetric matrix")
        G = G.real
    resid = float(space.fiber_residual(G))
    if resid > fiber_tol * max(1.0, float(space.form_norm())):
        raise NotInFiber("fiber residual %.3e exceeds tolerance" % resid)
    evals, evecs = np.linalg.eigh(0.5 * (G + G.T))
    order = np.argsort(-np.abs(evals), kind="stable")
    smax = max(np.max(np.abs(evals)), 1e-300)
    vectors = []
    signs = []
    for idx in order:
        lam = evals[idx]
        if abs(lam) <= rank_tol * smax:
            continue
        vec = np.sqrt(abs(lam)) * evecs[:, idx]
        vmax = np.max(np.abs(vec))
        for entry in vec:
            if abs(entry) > 1e-9 * vmax:
                if entry < 0:
                    vec = -vec
                break
        vectors.append(vec)
        signs.append(1 if lam > 0 else -1)
    return Representation(basis=space.basis, vectors=vectors, signs=signs, exact=False)


def verify_representation(f, rep):
    """max |coefficient of f - sum sign_i l_i^2|; exact zero in rational mode."""
    form_terms, nvars = _form_terms(f) if not isinstance(f, dict) else (f, rep.basis.nvars)
    got = rep.expand()
    keys = set(got) | set(form_terms)
    resid = 0
    for key in keys:
        diff = got.get(key, 0) - form_terms.get(key, 0)
        if not rep.exact:
            diff = float(diff)
        resid = max(resid, abs(diff))
    return resid


def equivalent(rep1, rep2, tol=1e-8):
    """Equality of the canonical Gram matrices, within tol (exact if possible)."""
    if rep1.basis.monomials != rep2.basis.monomials:
        return False
    if rep1.exact and rep2.exact:
        G1, G2 = rep1.gram_exact(), rep2.gram_exact()
        return all(
            G1[a][b] == G2[a][b] for a in range(len(G1)) for b in range(len(G1))
        )
    G1, G2 = rep1.gram(), rep2.gram()
    scale = max(1.0, float(np.max(np.abs(G1))), float(np.max(np.abs(G2))))
    return bool(np.max(np.abs(G1 - G2)) <= tol * scale)
