"""Factorization of psd bivariate matrix polynomials as A = B B^T.

A symmetric n x n matrix A of homogeneous binary forms with deg a_ij =
d_i + d_j defines a quadratic form f = sum a_ij x_i x_j on the prism over
the standard (n-1)-simplex truncated at heights d_i (for n = 2 this is the
rational normal scroll).  A psd point of the Gram family of f is found by
alternating projections, reduced to rank n+1 by boundary steps along fiber
directions supported on the range, and read off columnwise as the factor B
with n+1 columns and row degrees d_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np

from .biform import COMPLEX, BinaryForm, TermPoly
from .errors import (
    DimensionMismatch,
    IterationBudgetExceeded,
    NonSymmetric,
    NotPSD,
    OddDiagonalDegree,
    OffDiagonalDegreeMismatch,
    StuckAboveTarget,
)
from .gram import RANK_TOL, extract_representation, gram_space_from_basis
from .surfaces import MonomialBasis

FEAS_TOL = 1e-10
FEAS_BUDGET = 100_000
GRID_POINTS = 101
RESIDUAL_BOUND = 1e-8
REDUCE_TOL = 1e-11
REDUCE_BUDGET = 40_000
REDUCE_RESTARTS = 12
REDUCE_SEED = 96557


class SymMatrixPoly:
    """Symmetric matrix of homogeneous binary forms."""

    def __init__(self, entries):
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise DimensionMismatch("entries must form a square matrix")
        self.n = n
        self.entries = [list(row) for row in entries]
        for i in range(n):
            for j in range(n):
                a, b = self.entries[i][j], self.entries[j][i]
                same = a.deg == b.deg and all(
                    x == y for x, y in zip(a.coeffs, b.coeffs)
                )
                if not same and not (a.is_zero() and b.is_zero()):
                    raise NonSymmetric("entries (%d,%d) and (%d,%d) differ" % (i, j, j, i))

    def max_abs_coeff(self):
        out = 0.0
        for row in self.entries:
            for entry in row:
                out = max(out, float(entry.max_abs_coeff()))
        return out

    def evaluate(self, s, t):
        """A(s, t) as a float matrix."""
        return np.array(
            [[complex(e.eval(s, t)).real for e in row] for row in self.entries]
        )

    def to_json(self):
        out = {}
        for i in range(self.n):
            for j in range(i, self.n):
                if not self.entries[i][j].is_zero():
                    out["%d,%d" % (i, j)] = self.entries[i][j].to_json()
        return {"n": self.n, "entries": out}

    @classmethod
    def from_upper(cls, n, upper):
        """Build from a dict {(i, j): BinaryForm} over i <= j."""
        entries = [[None] * n for _ in range(n)]
        for (i, j), form in upper.items():
            entries[i][j] = form
            entries[j][i] = form
        degs = [
            max((upper[key].deg for key in upper if i in key), default=0)
            for i in range(n)
        ]
        for i in range(n):
            for j in range(n):
                if entries[i][j] is None:
                    entries[i][j] = BinaryForm.zero(degs[i])
        return cls(entries)

    @classmethod
    def from_json(cls, data):
        n = int(data["n"])
        raw = data.get("entries", {})
        parsed = {}
        for key, value in raw.items():
            i, j = (int(p) for p in key.split(","))
            parsed[(i, j)] = BinaryForm.from_json(value)
        degs = {}
        for (i, j), form in parsed.items():
            degs[i] = max(degs.get(i, 0), form.deg)
        entries = []
        for i in range(n):
            row = []
            for j in range(n):
                form = parsed.get((i, j)) or parsed.get((j, i))
                if form is None:
                    # zero entries need a consistent declared degree
                    form = BinaryForm.zero(degs.get(i, 0))
                row.append(form)
            entries.append(row)
        return cls(entries)


def degree_pattern(A):
    """Row degrees (d_1..d_n) with d_i = deg(a_ii) / 2.

    Verifies that every off-diagonal entry is zero or homogeneous of degree
    d_i + d_j; a violation means A cannot be psd for all (s, t) (the 2 x 2
    minor a_ii a_jj - a_ij^2 would have a negative leading term).
    """
    n = A.n
    heights = []
    for i in range(n):
        diag = A.entries[i][i]
        if diag.is_zero():
            if any(not A.entries[i][j].is_zero() for j in range(n)):
                raise OffDiagonalDegreeMismatch(
                    "zero diagonal entry (%d,%d) with a nonzero row" % (i, i)
                )
            heights.append(0)
            continue
        if diag.deg % 2 == 1:
            raise OddDiagonalDegree(
                "diagonal entry (%d,%d) has odd degree %d" % (i, i, diag.deg)
            )
        heights.append(diag.deg // 2)
    for i in range(n):
        for j in range(i + 1, n):
            entry = A.entries[i][j]
            if entry.is_zero():
                continue
            if entry.deg != heights[i] + heights[j]:
                raise OffDiagonalDegreeMismatch(
                    "entry (%d,%d) has degree %d, expected %d"
                    % (i, j, entry.deg, heights[i] + heights[j])
                )
    return tuple(heights)


@dataclass(frozen=True)
class PrismSpec:
    """Truncated prism over the standard simplex with integer heights."""

    heights: tuple

    def __post_init__(self):
        if len(self.heights) < 2:
            raise DimensionMismatch("a prism needs at least two heights")
        if any(d < 0 for d in self.heights):
            raise DimensionMismatch("negative prism height")

    @property
    def n(self):
        return len(self.heights)

    @property
    def top(self):
        return max(self.heights)

    @property
    def ambient_dim(self):
        return sum(d + 1 for d in self.heights) - 1

    @property
    def dim(self):
        return self.n

    @property
    def target_rank(self):
        return self.n + 1

    def basis(self):
        """Degree-one monomials x_i s^j t^(top - j), j <= d_i, as a basis.

        Variables are ordered (s, t, x_1..x_n); the common t-power lifts all
        blocks to the same (s, t)-degree, exactly as for scrolls.
        """
        D = self.top
        monos = []
        for i, d in enumerate(self.heights):
            for j in range(d + 1):
                expo = [j, D - j] + [0] * self.n
                expo[2 + i] = 1
                monos.append(tuple(expo))
        names = ("s", "t") + tuple("x%d" % (i + 1) for i in range(self.n))
        return MonomialBasis(tuple(monos), self.n + 2, names)

    def __str__(self):
        return "prism" + str(tuple(self.heights))


def embed(A):
    """The quadratic form f = sum a_ij x_i x_j on the prism of A.

    Returns (PrismSpec, TermPoly over (s, t, x_1..x_n)).  The (s, t)-degree
    of every term is lifted to 2 * max(d_i) by the same t-power that lifts
    the basis monomials.
    """
    heights = degree_pattern(A)
    n = A.n
    if n < 2:
        raise DimensionMismatch(
            "1 x 1 matrices are binary forms; use the two-squares enumeration"
        )
    spec = PrismSpec(heights)
    D = spec.top
    terms = {}
    for i in range(n):
        for j in range(n):
            entry = A.entries[i][j]
            if entry.is_zero():
                continue
            shift = 2 * D - entry.deg
            for p, coeff in enumerate(entry.coeffs):
                if coeff == 0:
                    continue
                expo = [p, entry.deg - p + shift] + [0] * n
                expo[2 + i] += 1
                expo[2 + j] += 1
                key = tuple(expo)
                terms[key] = terms.get(key, 0) + coeff
    return spec, TermPoly(n + 2, terms)


def prism_gram_space(A):
    spec, f = embed(A)
    return spec, gram_space_from_basis(f, spec.basis())


def psd_feasible(space, tol=FEAS_TOL, budget=FEAS_BUDGET, return_info=False):
    """A psd point of the Gram fiber, by alternating projections.

    Alternates eigenvalue clipping (projection onto the psd cone) with the
    orthogonal projection back onto the affine fiber.  The iterate always
    lies exactly on the fiber; it is returned once its smallest eigenvalue
    clears -tol relative to the spectral radius.  The distance moved per
    round is monotonically nonincreasing.

    Raises IterationBudgetExceeded with the final gap when the budget runs
    out (the gap certifies how infeasible the pair of sets still looks).
    """
    G = space.project_fiber(space.G0_f)
    distances = []
    for iteration in range(budget):
        evals, evecs = np.linalg.eigh(G)
        smax = max(float(np.max(np.abs(evals))), 1e-300)
        lam_min = float(evals[0])
        if lam_min >= -tol * smax:
            if return_info:
                return G, {"iterations": iteration, "distances": distances}
            return G
        clipped = evecs @ np.diag(np.maximum(evals, 0.0)) @ evecs.T
        distances.append(float(np.linalg.norm(G - clipped)))
        G = space.project_fiber(clipped)
    gap = distances[-1] if distances else 0.0
    raise IterationBudgetExceeded(budget, gap)


def _psd_clip(G):
    evals, evecs = np.linalg.eigh(G)
    return (evecs * np.maximum(evals, 0.0)) @ evecs.T


def _feasible_reflections(space, tol=FEAS_TOL, budget=FEAS_BUDGET):
    """Douglas-Rachford feasibility fallback for near-tangential fibers.

    Plain alternating projections converge arbitrarily slowly when the
    fiber meets the psd cone at a shallow angle; the reflection iteration
    z <- z + P_fiber(2 P_psd(z) - z) - P_psd(z) is far less sensitive.
    Returns a fiber point with lambda_min >= -tol * spectral radius.
    """
    z = np.asarray(space.G0_f, dtype=float).copy()
    check_every = 8
    gap = np.inf
    for iteration in range(budget):
        y = _psd_clip(z)
        w = space.project_fiber(2.0 * y - z)
        z = z + w - y
        if iteration % check_every == 0:
            x = space.project_fiber(y)
            evals = np.linalg.eigvalsh(x)
            smax = max(float(np.max(np.abs(evals))), 1e-300)
            gap = max(0.0, -float(evals[0]))
            if evals[0] >= -tol * smax:
                return x, {"iterations": iteration, "method": "reflections"}
    raise IterationBudgetExceeded(budget, gap)


def _numeric_rank(G, rank_tol):
    evals = np.linalg.eigvalsh(G)
    smax = max(float(np.max(np.abs(evals))), 1e-300)
    return int(np.sum(evals > rank_tol * smax))


def _truncate_psd(G, target_rank):
    """Nearest matrix that is psd of rank at most target_rank (Frobenius)."""
    evals, evecs = np.linalg.eigh(G)
    keep = np.maximum(evals[-target_rank:], 0.0)
    V = evecs[:, -target_rank:]
    return (V * keep) @ V.T


def _face_walk(space, G, target_rank, rank_tol):
    """Boundary steps along fiber directions supported on range(G).

    Each step solves for Delta = sum c_i K_i with Delta @ null(G) = 0
    (equivalently Delta = V W V^T on the range of G), then walks to the psd
    boundary along the extreme generalized eigenvalue, dropping the rank.
    Stops without error at a point where no direction remains; the caller
    continues with rank-projection cycling from there.
    """
    N = space.size
    k = space.kdim
    kernel_flat = space.kernel_f.reshape(k, N * N)
    for _round in range(4 * N + 4):
        evals, evecs = np.linalg.eigh(G)
        smax = max(float(np.max(np.abs(evals))), 1e-300)
        live = evals > rank_tol * smax
        r = int(np.sum(live))
        if r <= target_rank:
            return G
        V = evecs[:, live]
        lam = evals[live]
        null = evecs[:, ~live]  # includes clipped negatives
        # directions with Delta @ null = 0: right-null vectors of the
        # stacked constraint matrix rows (one row per kernel generator)
        constraint = (space.kernel_f @ null).reshape(k, -1)
        _u, svals, vh = np.linalg.svd(constraint.T, full_matrices=True)
        smax_c = svals[0] if svals.size else 0.0
        candidates = []
        for idx in range(vh.shape[0] - 1, -1, -1):
            sigma = svals[idx] if idx < svals.size else 0.0
            if smax_c > 0 and sigma > 1e-9 * smax_c:
                break
            candidates.append(vh[idx])
        stepped = False
        inv_sqrt = 1.0 / np.sqrt(lam)
        for c in candidates:
            delta = (c @ kernel_flat).reshape(N, N)
            W = V.T @ delta @ V
            M = inv_sqrt[:, None] * W * inv_sqrt[None, :]
            mu = np.linalg.eigvalsh(0.5 * (M + M.T))
            mu_scale = float(np.max(np.abs(mu))) if mu.size else 0.0
            if mu_scale <= 1e-12:
                continue
            if mu[0] < -1e-12 * mu_scale:
                tau = -1.0 / mu[0]
            else:
                tau = -1.0 / mu[-1]
            G = G + tau * delta
            stepped = True
            break
        if not stepped:
            return G
    return G


def _vech(M):
    idx = np.triu_indices(M.shape[0])
    return M[idx]


def _rank_newton(space, G, target_rank, rank_tol):
    """Newton polish onto an isolated rank-target psd point of the fiber.

    The vanishing of the null-block U^T G(theta) U gives z(z+1)/2 equations
    in the k fiber coordinates (an exactly determined system for prisms,
    where k = z(z+1)/2 with z = N - target); U is refreshed from the current
    eigenvectors each step, giving quadratic convergence near the root.
    Returns (ok, fiber point).
    """
    N = space.size
    k = space.kdim
    z = N - target_rank
    if z <= 0:
        return True, G
    theta = np.asarray(space.fiber_coordinates(G), dtype=float)
    G0 = np.asarray(space.G0_f, dtype=float)
    kernel = np.asarray(space.kernel_f, dtype=float)
    cur = G0 + np.tensordot(theta, kernel, axes=1)
    for _step in range(30):
        evals, evecs = np.linalg.eigh(cur)
        smax = max(float(np.max(np.abs(evals))), 1e-300)
        order = np.argsort(np.abs(evals))
        U = evecs[:, order[:z]]
        Fvec = _vech(U.T @ cur @ U)
        if float(np.max(np.abs(Fvec))) <= 1e-13 * smax:
            live = evals > rank_tol * smax
            psd_ok = bool(np.all(evals >= -rank_tol * smax))
            return psd_ok and int(np.sum(live)) <= target_rank, cur
        J = np.empty((Fvec.size, k))
        for i in range(k):
            J[:, i] = _vech(U.T @ kernel[i] @ U)
        try:
            step, *_ = np.linalg.lstsq(J, -Fvec, rcond=None)
        except np.linalg.LinAlgError:
            return False, cur
        if not np.all(np.isfinite(step)):
            return False, cur
        theta = theta + step
        cur = G0 + np.tensordot(theta, kernel, axes=1)
    return False, cur


def _rank_projection_cycle(space, G, target_rank, rank_tol, budget):
    """Alternate fiber projection with psd rank-target_rank truncation.

    The rank-(target) psd points of the fiber are isolated, so this is a
    root-finding iteration rather than a convex method; once the truncation
    gap is small the Newton polish takes over and finishes quadratically.
    Returns (converged, fiber point, final gap).
    """
    scale = max(1.0, float(np.linalg.norm(G)))
    gap = np.inf
    polish_at = 1e-3
    for _ in range(budget):
        T = _truncate_psd(G, target_rank)
        gap = float(np.linalg.norm(G - T)) / scale
        if gap <= REDUCE_TOL:
            return True, G, gap
        if gap <= polish_at:
            ok, polished = _rank_newton(space, G, target_rank, rank_tol)
            if ok:
                return True, polished, 0.0
            polish_at *= 0.1  # not in the basin yet; keep cycling
        G = space.project_fiber(T)
    return False, G, gap


def rank_reduce(
    space,
    G,
    target_rank,
    rank_tol=None,
    budget=REDUCE_BUDGET,
    restarts=REDUCE_RESTARTS,
):
    """Reduce a psd fiber point to rank <= target_rank, staying in the fiber.

    Phase one walks to the psd boundary along fiber directions supported on
    the range of G, which strictly drops the rank while such directions
    exist.  Generic fibers run out of face directions above the target
    because the rank-(n+1) points are isolated; phase two switches to
    alternating projections between the fiber and the psd rank-<=target
    cone, seeded deterministically and restarted from perturbed fiber
    points when a cycle fails to converge.

    Raises StuckAboveTarget with the best achieved rank when every attempt
    fails; callers may retry with a larger budget.
    """
    rank_tol = RANK_TOL if rank_tol is None else rank_tol
    G = np.asarray(G, dtype=float)
    G = space.project_fiber(0.5 * (G + G.T))
    if _numeric_rank(G, rank_tol) <= target_rank:
        return G
    G = _face_walk(space, G, target_rank, rank_tol)
    if _numeric_rank(G, rank_tol) <= target_rank:
        return G

    k = space.kdim
    kernel_flat = space.kernel_f.reshape(k, -1)
    scale = max(1.0, float(np.linalg.norm(G)))
    rng = np.random.default_rng(np.random.SeedSequence([REDUCE_SEED, space.size, k]))
    best_rank = _numeric_rank(G, rank_tol)
    start = G
    for _attempt in range(restarts + 1):
        ok, Gout, _gap = _rank_projection_cycle(
            space, start, target_rank, rank_tol, budget
        )
        if ok:
            achieved = _numeric_rank(Gout, rank_tol)
            if achieved <= target_rank:
                return Gout
        best_rank = min(best_rank, _numeric_rank(Gout, rank_tol))
        # restart from a perturbed psd fiber point near the failed iterate
        bump = (rng.standard_normal(k) @ kernel_flat).reshape(G.shape)
        bump *= 0.25 * scale / max(1e-300, float(np.linalg.norm(bump)))
        start = space.project_fiber(_truncate_psd(Gout + bump, target_rank))
    raise StuckAboveTarget(best_rank, target_rank)


@dataclass
class FactorResult:
    """Outcome of a matrix factorization A = B B^T."""

    heights: tuple
    columns: list  # linear forms as rows of per-row BinaryForms
    residual: float
    rank: int
    warning: str | None = None
    info: dict = dataclass_field(default_factory=dict)

    @property
    def n(self):
        return len(self.heights)

    @property
    def ncols(self):
        return len(self.columns)

    def rows(self):
        """B as a list of rows, row i holding degree-d_i forms."""
        return [
            [col[i] for col in self.columns] for i in range(self.n)
        ]

    def product(self):
        """B B^T as a SymMatrixPoly (float coefficients)."""
        n = self.n
        upper = {}
        for i in range(n):
            for j in range(i, n):
                total = BinaryForm.zero(
                    self.heights[i] + self.heights[j], field=COMPLEX
                )
                for col in self.columns:
                    total = total + col[i] * col[j]
                upper[(i, j)] = total
        return SymMatrixPoly.from_upper(n, upper)

    def to_json(self):
        return {
            "heights": list(self.heights),
            "columns": [
                [form.to_json() for form in col] for col in self.columns
            ],
            "residual": self.residual,
            "rank": self.rank,
            "warning": self.warning,
        }


def _column_from_vector(vec, spec):
    """Split a prism-basis coefficient vector into per-row binary forms."""
    out = []
    pos = 0
    for d in spec.heights:
        coeffs = [float(vec[pos + j]) for j in range(d + 1)]
        out.append(BinaryForm(coeffs, d))
        pos += d + 1
    return out


def check_psd_on_grid(A, grid=GRID_POINTS, tol=1e-9):
    """Sample A over directions of P^1; raises NotPSD with a witness."""
    scale = max(A.max_abs_coeff(), 1e-300)
    for u in np.linspace(-1.0, 1.0, grid):
        for v in np.linspace(-1.0, 1.0, grid):
            if u == 0.0 and v == 0.0:
                continue
            M = A.evaluate(float(u), float(v))
            lam = float(np.linalg.eigvalsh(M)[0])
            if lam < -tol * scale:
                raise NotPSD((float(u), float(v), lam))


def _residual(A, result):
    got = result.product()
    worst = 0.0
    for i in range(A.n):
        for j in range(A.n):
            a = A.entries[i][j]
            b = got.entries[i][j]
            coeffs_a = [complex(c).real for c in a.coeffs]
            if a.deg != b.deg:
                # zero entries may carry a different declared degree
                if not a.is_zero():
                    raise DimensionMismatch("degree drift in the product")
                coeffs_a = [0.0] * (b.deg + 1)
            for x, y in zip(coeffs_a, b.coeffs):
                worst = max(worst, abs(x - complex(y).real))
    return worst


def factor(A, tol=FEAS_TOL, budget=FEAS_BUDGET, grid=GRID_POINTS):
    """Factor a psd bivariate matrix polynomial as A = B B^T, B n x (n+1).

    Pipeline: grid psd check, prism embedding, Gram space, alternating
    projections to a psd fiber point, rank reduction to n+1, column
    extraction.  When rank reduction stalls above n+1 (non-generic input)
    the achieved factorization is returned with a warning; up to 2n columns
    still certify psd-ness.

    Raises NotPSD (with witness) or IterationBudgetExceeded.
    """
    if A.n == 1:
        return _factor_binary(A)
    check_psd_on_grid(A, grid=grid)
    spec, space = prism_gram_space(A)
    try:
        first_budget = min(budget, 20_000)
        G, info = psd_feasible(space, tol=tol, budget=first_budget, return_info=True)
    except IterationBudgetExceeded:
        G, info = _feasible_reflections(space, tol=tol, budget=budget)
    target = spec.target_rank
    warning = None
    try:
        G = rank_reduce(space, G, target)
    except StuckAboveTarget as exc:
        warning = (
            "rank reduction stalled at %d (target %d); emitting extra columns"
            % (exc.achieved, exc.target)
        )
    rep = extract_representation(space, G)
    if any(s != 1 for s in rep.signs):
        raise NotPSD((0.0, 0.0, "negative eigenvalue in the reduced Gram matrix"))
    columns = [_column_from_vector(vec, spec) for vec in rep.vectors]
    rank = len(columns)
    while len(columns) < target:
        columns.append(
            [BinaryForm.zero(d, field=COMPLEX) for d in spec.heights]
        )
    result = FactorResult(
        heights=spec.heights,
        columns=columns,
        residual=0.0,
        rank=rank,
        warning=warning,
        info={"feasIterations": info["iterations"]},
    )
    result.residual = _residual(A, result)
    return result


def _factor_binary(A):
    """n = 1: a sum of two squares of the single entry."""
    from .binary_sos import enumerate_two_squares, rep_forms
    from .errors import NotNonnegative

    form = A.entries[0][0]
    if form.deg % 2 == 1:
        raise OddDiagonalDegree("entry has odd degree %d" % form.deg)
    d = form.deg // 2
    if form.is_zero():
        zero = BinaryForm.zero(d, field=COMPLEX)
        return FactorResult(heights=(d,), columns=[[zero], [zero]], residual=0.0, rank=0)
    try:
        reps = enumerate_two_squares(form)
    except NotNonnegative as exc:
        raise NotPSD((None, None, str(exc))) from None
    p, q = rep_forms(reps[0])
    result = FactorResult(
        heights=(d,),
        columns=[[p], [q]],
        residual=0.0,
        rank=2 if not q.is_zero() else 1,
        warning=None,
    )
    result.residual = _residual(A, result)
    return result
