"""Enumeration of low-rank points on a Gram spectrahedron.

The rank <= r locus of the affine family G(theta) = G0 + sum theta_i K_i is
cut out by all (r+1) x (r+1) minors.  Symmetry of G makes the minor for row
set I and column set J equal to the one for (J, I), so only pairs with
I <= J are expanded.  A seeded square subsystem of k random complex
combinations of the minors is solved by total-degree homotopy continuation;
endpoints are filtered against the full minor list, clustered, tagged real,
and classified by inertia.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import (
    DimensionMismatch,
    PathFailureBudgetExceeded,
    RankTooLarge,
)
from .gram import (
    PSD_TOL,
    RANK_TOL,
    extract_representation,
    inertia,
    verify_representation,
)
from .surfaces import CONE_RNC, SCROLL, VERONESE, genericity_check
from .tracking import (
    STATUS_CONVERGED,
    STATUS_DIVERGED,
    STATUS_FAILED,
    PolySystem,
    newton_polish,
    track_all,
)

RESIDUAL_TOL = 1e-8
CLUSTER_RADIUS = 1e-6
REAL_TOL = 1e-6
FAIL_BUDGET = 0.05
COEFF_CUTOFF = 1e-13  # relative floor below which expansion coefficients are noise


def _monomials(k, maxdeg):
    """Exponent tuples in k variables of total degree <= maxdeg, graded order."""
    monos = []
    for deg in range(maxdeg + 1):
        for combo in itertools.combinations_with_replacement(range(k), deg):
            expo = [0] * k
            for v in combo:
                expo[v] += 1
            monos.append(tuple(expo))
    return monos


def _shift_tables(monos, index, k, maxdeg):
    """Per-variable index maps realizing multiplication by theta_v."""
    tables = []
    for v in range(k):
        src = []
        dst = []
        for i, expo in enumerate(monos):
            if sum(expo) < maxdeg:
                lifted = tuple(
                    e + 1 if j == v else e for j, e in enumerate(expo)
                )
                src.append(i)
                dst.append(index[lifted])
        tables.append((np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp)))
    return tables


class _AffineDet:
    """Expands determinants of submatrices of G0 + sum theta_i K_i.

    Entries are affine in theta; Laplace expansion along rows of the fixed
    row set I shares sub-determinants across all column sets J through a
    per-I memo keyed by (depth, columns).
    """

    def __init__(self, G0, kernel, monos, index, shifts):
        self.G0 = G0
        self.kernel = kernel  # (k, N, N)
        self.k = kernel.shape[0]
        self.nmono = len(monos)
        self.shifts = shifts
        self.index = index

    def _entry_vec(self, a, b):
        vec = np.zeros(self.nmono)
        vec[0] = self.G0[a, b]
        # degree-one monomials occupy slots 1..k in graded order
        for v in range(self.k):
            vec[1 + v] = self.kernel[v, a, b]
        return vec

    def _affine_mul(self, a, b, vec):
        out = self.G0[a, b] * vec
        for v in range(self.k):
            coeff = self.kernel[v, a, b]
            if coeff != 0.0:
                src, dst = self.shifts[v]
                out[dst] += coeff * vec[src]
        return out

    def minor(self, I, J, memo):
        return self._det(I, tuple(J), 0, memo)

    def _det(self, I, J, depth, memo):
        key = (depth, J)
        cached = memo.get(key)
        if cached is not None:
            return cached
        row = I[depth]
        if len(J) == 1:
            vec = self._entry_vec(row, J[0])
        else:
            vec = np.zeros(self.nmono)
            sign = 1.0
            for pos in range(len(J)):
                sub = self._det(I, J[:pos] + J[pos + 1 :], depth + 1, memo)
                vec += sign * self._affine_mul(row, J[pos], sub)
                sign = -sign
        memo[key] = vec
        return vec


@dataclass
class MinorSystem:
    """All (rank+1)-minors of a Gram family plus a seeded square subsystem."""

    space: object
    rank: int
    seed: int
    mono_exps: np.ndarray  # (nmono, k) exponent rows, graded order
    minors: np.ndarray  # (nminors, nmono) dense coefficient rows
    minor_pairs: list
    combos: np.ndarray  # (k, nmono) complex coefficient rows
    degrees: np.ndarray  # (k,) total degrees of the combinations

    @property
    def k(self):
        return self.space.kdim

    @property
    def total_paths(self):
        return int(np.prod(self.degrees))

    def _monomial_values(self, theta):
        theta = np.asarray(theta, dtype=np.complex128)
        return np.prod(theta[None, :] ** self.mono_exps, axis=1)

    def minor_values(self, theta):
        """All minors evaluated at theta (complex vector)."""
        return self.minors @ self._monomial_values(theta)

    def residual(self, theta):
        """max |minor| relative to the matrix scale raised to the minor size."""
        vals = self.minor_values(theta)
        G = self.space.gram_at(np.asarray(theta, dtype=np.complex128))
        scale = max(1.0, float(np.max(np.abs(G)))) ** (self.rank + 1)
        return float(np.max(np.abs(vals))) / scale

    def poly_system(self):
        polys = []
        for row, deg in zip(self.combos, self.degrees):
            cutoff = COEFF_CUTOFF * float(np.max(np.abs(row)))
            poly = {}
            for i, coeff in enumerate(row):
                expo = tuple(int(e) for e in self.mono_exps[i])
                if sum(expo) <= deg and abs(coeff) > cutoff:
                    poly[expo] = complex(coeff)
            polys.append(poly)
        return PolySystem(polys, self.k)

    def to_json(self):
        return {
            "rank": self.rank,
            "seed": self.seed,
            "k": self.k,
            "minorCount": len(self.minor_pairs),
            "degrees": [int(d) for d in self.degrees],
            "totalPaths": self.total_paths,
        }


def minor_system(space, rank, seed=0):
    """Expand the (rank+1)-minors of G(theta) and draw a square subsystem.

    Minors are expanded exactly in floating point (the entries are affine
    with rational coefficients) over a dense graded monomial index.  The
    square subsystem takes k independent complex Gaussian combinations of
    the full minor list, seeded for reproducibility.
    """
    N = space.size
    k = space.kdim
    if rank < 1 or rank >= N:
        raise RankTooLarge(
            "rank %d out of range for %d x %d Gram matrices" % (rank, N, N)
        )
    if k == 0:
        raise DimensionMismatch("Gram family has no free parameters")
    m = rank + 1
    monos = _monomials(k, m)
    index = {expo: i for i, expo in enumerate(monos)}
    shifts = _shift_tables(monos, index, k, m)
    expander = _AffineDet(space.G0_f, space.kernel_f, monos, index, shifts)
    subsets = list(itertools.combinations(range(N), m))
    pairs = []
    rows = []
    for i, I in enumerate(subsets):
        memo = {}
        for J in subsets[i:]:
            pairs.append((I, J))
            rows.append(expander.minor(I, J, memo))
    minors = np.array(rows)
    rng = np.random.default_rng(seed)
    coeff = rng.standard_normal((k, len(pairs))) + 1j * rng.standard_normal(
        (k, len(pairs))
    )
    combos = coeff @ minors
    degrees = []
    degs_per_mono = np.array([sum(expo) for expo in monos])
    for row in combos:
        cutoff = COEFF_CUTOFF * float(np.max(np.abs(row)))
        live = np.abs(row) > cutoff
        degrees.append(int(degs_per_mono[live].max(initial=0)))
    return MinorSystem(
        space=space,
        rank=rank,
        seed=seed,
        mono_exps=np.array(monos, dtype=np.int64),
        minors=minors,
        minor_pairs=pairs,
        combos=combos,
        degrees=np.array(degrees, dtype=np.int64),
    )


@dataclass
class SolutionSet:
    """Deduplicated endpoints of the homotopy, in canonical order."""

    system: MinorSystem
    points: list  # complex (k,) arrays, sorted canonically
    is_real: list
    residuals: list
    cluster_sizes: list
    path_stats: dict

    def __len__(self):
        return len(self.points)

    def real_points(self):
        return [p.real for p, r in zip(self.points, self.is_real) if r]

    def to_json(self):
        pts = []
        for point, real_flag, resid, size in zip(
            self.points, self.is_real, self.residuals, self.cluster_sizes
        ):
            pts.append(
                {
                    "theta": [[float(v.real), float(v.imag)] for v in point],
                    "real": bool(real_flag),
                    "residual": float(resid),
                    "pathCount": int(size),
                }
            )
        return {"points": pts, "pathStats": dict(self.path_stats)}


def _canonical_key(point):
    key = []
    for v in point:
        key.append(float(v.real))
        key.append(float(v.imag))
    return tuple(key)


def _sweep(psys, gamma):
    """One full tracking sweep plus a careful retrack of misbehaving paths.

    The endpoint of a path is fixed by gamma, so a path recovered by the
    retrack lands on the solution it always owned.  Paths stuck far from the
    origin are reclassified as divergent, not tracker failures.
    """
    starts = psys.start_points()
    endpoints, statuses, _steps = track_all(psys, gamma, starts=starts)
    # only stalled paths are suspects; paths past the divergence cutoff are
    # infinity-bound and careful retracking would crawl after them
    retry = np.nonzero(statuses == STATUS_FAILED)[0]
    retracked = 0
    if len(retry) > 0:
        re_x, re_status, _ = track_all(
            psys, gamma, starts=starts[retry], careful=True
        )
        for j, i in enumerate(retry):
            if re_status[j] == STATUS_CONVERGED:
                endpoints[i] = re_x[j]
                statuses[i] = STATUS_CONVERGED
                retracked += 1
    for i in range(len(statuses)):
        if statuses[i] == STATUS_FAILED and np.max(np.abs(endpoints[i])) > 1e7:
            statuses[i] = STATUS_DIVERGED
    return endpoints, statuses, retracked


def solve(
    system,
    seed=0,
    residual_tol=None,
    cluster_radius=None,
    real_tol=None,
    fail_budget=FAIL_BUDGET,
):
    """Track the seeded square subsystem and post-process its endpoints.

    Endpoints are kept when every minor vanishes to residual_tol (relative),
    merged within cluster_radius, and sorted canonically so the result is a
    deterministic function of (system, seed).  Points within real_tol of the
    real locus are re-polished from their real parts and stored real.

    When paths fail even after the careful retrack, one more sweep runs with
    an independent gamma: the solution set does not depend on gamma, so the
    union of validated endpoints can only recover what the first sweep lost.

    Raises PathFailureBudgetExceeded when more than fail_budget of the
    non-diverging paths fail to converge.
    """
    residual_tol = RESIDUAL_TOL if residual_tol is None else residual_tol
    cluster_radius = CLUSTER_RADIUS if cluster_radius is None else cluster_radius
    real_tol = REAL_TOL if real_tol is None else real_tol
    rng = np.random.default_rng(seed)
    gamma = np.exp(2j * np.pi * rng.uniform())
    gamma2 = np.exp(2j * np.pi * rng.uniform())
    psys = system.poly_system()
    endpoints, statuses, retracked = _sweep(psys, gamma)
    total = len(statuses)
    diverged = int(np.sum(statuses == STATUS_DIVERGED))
    failed = int(np.sum(statuses == STATUS_FAILED))
    tracked = total - diverged
    if tracked > 0 and failed > fail_budget * tracked:
        raise PathFailureBudgetExceeded(failed, total)
    # stalled paths that sit at a large parameter norm with vanishing minors
    # are escaping toward solutions at infinity of the affine chart
    escaping = 0
    escape_norm = 0.0
    for i in np.nonzero(statuses == STATUS_FAILED)[0]:
        norm = float(np.max(np.abs(endpoints[i])))
        if norm > 1e3 and system.residual(endpoints[i]) <= 1e-4:
            escaping += 1
            escape_norm = max(escape_norm, norm)
    pool = [endpoints[statuses == STATUS_CONVERGED]]
    second_sweep = failed > 0
    if second_sweep:
        e2, s2, r2 = _sweep(psys, gamma2)
        retracked += r2
        pool.append(e2[s2 == STATUS_CONVERGED])
    junk = 0
    survivors = []
    for sweep_id, block in enumerate(pool):
        for point in block:
            resid = system.residual(point)
            if resid <= residual_tol:
                survivors.append((point.copy(), resid, sweep_id))
            else:
                junk += 1
    survivors.sort(key=lambda item: _canonical_key(item[0]))
    # cluster size is the max path count over sweeps: both sweeps see every
    # solution once generically, so only true multiplicity exceeds one
    clusters = []  # [representative, best residual, per-sweep path counts]
    for point, resid, sweep_id in survivors:
        placed = False
        for entry in clusters:
            rep = entry[0]
            tol = cluster_radius * max(1.0, float(np.max(np.abs(rep))))
            if np.max(np.abs(point - rep)) <= tol:
                entry[2][sweep_id] += 1
                if resid < entry[1]:
                    entry[1] = resid
                placed = True
                break
        if not placed:
            counts = [0] * len(pool)
            counts[sweep_id] = 1
            clusters.append([point, resid, counts])
    points = []
    real_flags = []
    residuals = []
    sizes = []
    for rep, resid, counts in clusters:
        size = max(counts)
        real_flag = False
        if float(np.max(np.abs(rep.imag))) <= real_tol * max(
            1.0, float(np.max(np.abs(rep)))
        ):
            # the gate is the residual of the realized real point, not the
            # polish convergence bit: Newton may stagnate at rounding level
            candidate = rep.real.astype(np.complex128)
            _, polished = newton_polish(psys, candidate)
            realized = polished.real.astype(np.complex128)
            if not np.all(np.isfinite(realized)):
                realized = candidate
            real_resid = system.residual(realized)
            if real_resid <= residual_tol:
                rep = realized
                resid = real_resid
                real_flag = True
        points.append(rep)
        real_flags.append(real_flag)
        residuals.append(resid)
        sizes.append(size)
    stats = {
        "paths": total,
        "converged": int(np.sum(statuses == STATUS_CONVERGED)),
        "diverged": diverged,
        "failed": failed,
        "retracked": retracked,
        "secondSweep": second_sweep,
        "stalledEscaping": escaping,
        "escapeNormMax": escape_norm,
        "junkFiltered": junk,
        "solutions": len(points),
    }
    return SolutionSet(
        system=system,
        points=points,
        is_real=real_flags,
        residuals=residuals,
        cluster_sizes=sizes,
        path_stats=stats,
    )


def expected_counts(surface):
    """Generic solution counts by surface kind, or None when unknown.

    Smooth scrolls: 4^g complex rank-3 points, 2^g of them psd, and 2^g
    more indefinite exactly when g is odd.  Cones over the degree-d rational
    normal curve: counts of balanced factor pairs of the reduced binary
    form (all pairings, conjugation-stable pairings, conjugate pairings).
    Veronese surface: the classical 63 / 15 / 8.
    """
    if surface is None:
        return None
    if surface.kind == SCROLL:
        g = surface.genus
        psd = 2**g
        indefinite = 2**g if g % 2 == 1 else 0
        return {
            "complex": 4**g,
            "real": psd + indefinite,
            "psd": psd,
            "indefinite": indefinite,
        }
    if surface.kind == CONE_RNC:
        d = surface.d
        psd = 2 ** (d - 1)
        both_real = math.comb(d, d // 2) // 2 if d % 2 == 0 else 0
        return {
            "complex": math.comb(2 * d, d) // 2,
            "real": psd + both_real,
            "psd": psd,
            "indefinite": both_real,
        }
    if surface.kind == VERONESE:
        return {"complex": 63, "real": 15, "psd": 8, "indefinite": 7}
    return None


@dataclass
class CountReport:
    """Classification of the solutions of one enumeration run."""

    counts: dict
    expected: dict | None
    warning: str | None
    entries: list
    path_stats: dict
    notes: list = dataclass_field(default_factory=list)
    solution_set: object = None  # SolutionSet when produced by enumerate_rank

    def representations(self):
        return [e["representation"] for e in self.entries if e.get("representation")]

    def psd_entries(self):
        return [e for e in self.entries if e.get("psd")]

    def summary_lines(self):
        lines = []
        order = ("complex", "real", "psd", "indefinite")
        got = "  ".join("%s=%d" % (key, self.counts[key]) for key in order)
        lines.append("counts: " + got)
        if self.expected is not None:
            want = "  ".join(
                "%s=%d" % (key, self.expected[key]) for key in order
            )
            lines.append("expected (generic): " + want)
        if self.warning:
            lines.append("warning: " + self.warning)
        for note in self.notes:
            lines.append("note: " + note)
        return lines

    def to_json(self):
        entries = []
        for entry in self.entries:
            rep = entry.get("representation")
            entries.append(
                {
                    "theta": [float(v) for v in entry["theta"]],
                    "inertia": list(entry["inertia"]),
                    "psd": bool(entry["psd"]),
                    "verifyResidual": entry.get("verify_residual"),
                    "representation": rep.to_json() if rep is not None else None,
                }
            )
        return {
            "counts": dict(self.counts),
            "expected": dict(self.expected) if self.expected else None,
            "warning": self.warning,
            "entries": entries,
            "pathStats": dict(self.path_stats),
            "notes": list(self.notes),
        }


def classify(space, solutions, genericity=None, rank_tol=None, psd_tol=None):
    """Count and classify the solutions; extract certificates at psd points.

    Real points are split by the inertia of G(theta): no negative eigenvalue
    means a sum of rank squares (a psd point), otherwise the representation
    is a signed mix.  A warning is attached when the observed complex count
    falls short of the generic count for the surface.
    """
    rank_tol = RANK_TOL if rank_tol is None else rank_tol
    psd_tol = PSD_TOL if psd_tol is None else psd_tol
    counts = {
        "complex": len(solutions.points),
        "real": sum(1 for r in solutions.is_real if r),
        "psd": 0,
        "indefinite": 0,
    }
    entries = []
    for point, real_flag in zip(solutions.points, solutions.is_real):
        if not real_flag:
            continue
        theta = point.real
        G = space.gram_at(theta)
        ine = inertia(G, tol=psd_tol)
        psd = ine[1] == 0
        counts["psd" if psd else "indefinite"] += 1
        entry = {"theta": theta, "inertia": ine, "psd": psd}
        if psd:
            rep = extract_representation(space, G, rank_tol=rank_tol)
            entry["representation"] = rep
            entry["verify_residual"] = float(verify_representation(space.form, rep))
        entries.append(entry)
    expected = expected_counts(getattr(space, "surface", None))
    notes = []
    if genericity is None and space.surface is not None and space.form is not None:
        try:
            genericity = genericity_check(space.form, space.surface)
        except Exception:  # diagnostics only; classification proceeds without
            genericity = None
    warning = None
    if genericity is not None:
        if genericity.delta_squarefree is False:
            notes.append("discriminant is not squarefree")
        if genericity.curve_smooth is False:
            notes.append("branch curve is singular")
        genericity.mark_observed_count(counts["complex"])
        warning = genericity.enumeration_warning
        notes.extend(genericity.notes)
    if (
        warning is None
        and expected is not None
        and counts["complex"] < expected["complex"]
    ):
        warning = "non-generic form: %d rank-%d Gram matrices found, expected %d" % (
            counts["complex"],
            solutions.system.rank,
            expected["complex"],
        )
    if warning is not None:
        multi = [
            (i, size)
            for i, size in enumerate(solutions.cluster_sizes)
            if size > 1
        ]
        for i, size in multi:
            notes.append(
                "solution %d absorbed %d paths (multiplicity > 1 degeneration)"
                % (i, size)
            )
        escaping = solutions.path_stats.get("stalledEscaping", 0)
        if escaping:
            notes.append(
                "%d paths stalled escaping to infinity (parameter norm up to"
                " %.1e, minors vanishing): missing representations degenerate"
                " at the boundary of the affine Gram chart"
                % (escaping, solutions.path_stats.get("escapeNormMax", 0.0))
            )
        notes.append(
            "path endpoints: %d diverged, %d filtered as junk"
            % (
                solutions.path_stats.get("diverged", 0),
                solutions.path_stats.get("junkFiltered", 0),
            )
        )
    return CountReport(
        counts=counts,
        expected=expected,
        warning=warning,
        entries=entries,
        path_stats=dict(solutions.path_stats),
        notes=notes,
    )


def enumerate_rank(
    space,
    rank=3,
    seed=0,
    residual_tol=None,
    cluster_radius=None,
    real_tol=None,
):
    """Full pipeline: minors, homotopy, classification, for one seed.

    The seed feeds two independent streams (combination coefficients and the
    start-system rotation), so runs with equal seeds are reproducible.
    """
    ss = np.random.SeedSequence(seed)
    combo_seed, gamma_seed = (int(s) for s in ss.generate_state(2, np.uint64))
    system = minor_system(space, rank, seed=combo_seed)
    solutions = solve(
        system,
        seed=gamma_seed,
        residual_tol=residual_tol,
        cluster_radius=cluster_radius,
        real_tol=real_tol,
    )
    report = classify(space, solutions)
    report.solution_set = solutions
    return report
