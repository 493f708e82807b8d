"""Gram fibers: exact expansion identities, kernels, representations.

The load-bearing identity is m^T G(theta) m = f for every theta, checked
exactly over the rationals (no tolerances): G0 reproduces f and each kernel
matrix expands to zero, so the whole affine fiber does.
"""

from fractions import Fraction

import numpy as np
import pytest

from minsos.biform import Biform
from minsos.errors import DimensionMismatch, NotInFiber
from minsos.gram import (
    Representation,
    build_gram_space,
    equivalent,
    extract_representation,
    inertia,
    representation_from_forms,
    symmetric_rank,
    verify_representation,
)
from minsos.sampling import random_positive_form
from minsos.surfaces import cone_rnc, monomial_basis, scroll, veronese


def _space(spec, seed=3):
    return build_gram_space(random_positive_form(spec, seed=seed), spec)


# ------------------------------------------------------------- fiber basics


def test_kernel_dimensions():
    # binomial(N+1, 2) minus the number of degree-two monomials
    assert _space(scroll(1, 1)).kdim == 1
    assert _space(scroll(2, 1)).kdim == 3
    assert _space(scroll(2, 2)).kdim == 6
    assert _space(scroll(3, 1)).kdim == 6
    assert _space(cone_rnc(4)).kdim == 6
    assert _space(veronese()).kdim == 6


def test_g0_expands_to_form_exactly():
    for spec in (scroll(2, 1), cone_rnc(3), veronese()):
        space = _space(spec)
        assert space.fiber_residual(space.G0) == 0


def test_kernel_matrices_expand_to_zero_exactly():
    space = _space(scroll(2, 2))
    for K in space.kernel:
        assert all(K[a][b] == K[b][a] for a in range(space.size) for b in range(space.size))
        assert space.expand_gram(K) == {}


def test_gram_at_exact_stays_on_fiber():
    space = _space(scroll(2, 1))
    theta = [Fraction(1, 3), Fraction(-2), Fraction(5, 7)]
    G = space.gram_at_exact(theta)
    assert space.fiber_residual(G) == 0


def test_gram_at_matches_exact_evaluation():
    space = _space(scroll(2, 1))
    theta = [0.25, -1.5, 3.0]
    G = space.gram_at(np.array(theta))
    Ge = space.gram_at_exact([Fraction(1, 4), Fraction(-3, 2), 3])
    assert np.max(np.abs(G - np.array([[float(v) for v in row] for row in Ge]))) < 1e-14


def test_gram_at_complex_theta():
    space = _space(scroll(1, 1))
    G = space.gram_at(np.array([1 + 2j]))
    assert np.iscomplexobj(G)
    assert np.max(np.abs(G - G.T)) == 0


def test_gram_at_rejects_wrong_shape():
    space = _space(scroll(2, 1))
    with pytest.raises(DimensionMismatch):
        space.gram_at(np.zeros(2))


def test_fiber_coordinates_roundtrip():
    space = _space(scroll(2, 2))
    theta = np.array([0.5, -1.0, 2.0, 0.0, 1.25, -0.75])
    got = space.fiber_coordinates(space.gram_at(theta))
    assert np.max(np.abs(got - theta)) < 1e-10


def test_project_fiber_idempotent_and_on_fiber():
    space = _space(scroll(2, 1))
    rng = np.random.default_rng(0)
    M = rng.standard_normal((space.size, space.size))
    M = 0.5 * (M + M.T)
    P = space.project_fiber(M)
    assert space.fiber_residual(P) < 1e-9 * max(1.0, space.form_norm())
    P2 = space.project_fiber(P)
    assert np.max(np.abs(P2 - P)) < 1e-12


def test_space_json_has_shape_fields():
    space = _space(scroll(2, 1))
    data = space.to_json()
    assert len(data["basis"]) == 5
    assert data["k"] == 3
    assert len(data["kernel"]) == 3


# ------------------------------------------------- inertia and matrix rank


def test_inertia_known_signature():
    G = np.diag([3.0, 1.0, 0.0, -2.0])
    assert inertia(G) == (2, 1, 1)
    assert symmetric_rank(G) == 3


def test_inertia_scales_with_matrix():
    G = np.diag([1e12, 1e-20, -1e12])
    # 1e-20 is numerically zero relative to the spectral radius
    assert inertia(G) == (1, 1, 1)


# ------------------------------------------------------------ representations


def test_extract_representation_diagonal_gram():
    # f = sum of squared basis monomials has G = I on the fiber
    spec = scroll(1, 1)
    basis = monomial_basis(spec, 1)
    terms = {}
    for mono in basis:
        key = tuple(2 * e for e in mono)
        terms[key] = terms.get(key, 0) + 1
    f = Biform(2, 2, terms)
    space = build_gram_space(f, spec)
    rep = extract_representation(space, np.eye(4))
    assert rep.nforms == 4
    assert all(s == 1 for s in rep.signs)
    assert verify_representation(f, rep) < 1e-12


def test_extract_rejects_off_fiber_matrix():
    space = _space(scroll(1, 1))
    with pytest.raises(NotInFiber):
        extract_representation(space, np.zeros((4, 4)))


def test_representation_expand_exact():
    # (t y + s x)^2 + (s y)^2 over the scroll(1,1) basis [ty, sy, tx, sx]
    basis = monomial_basis(scroll(1, 1), 1)
    rep = Representation(
        basis=basis, vectors=[[1, 0, 0, 1], [0, 1, 0, 0]], signs=[1, 1], exact=True
    )
    f = Biform(
        2,
        2,
        {
            (0, 2, 0, 2): 1,  # t^2 y^2
            (1, 1, 1, 1): 2,  # 2 s t x y
            (2, 0, 2, 0): 1,  # s^2 x^2
            (2, 0, 0, 2): 1,  # s^2 y^2
        },
    )
    assert verify_representation(f, rep) == 0


def test_representation_from_forms_biform_input():
    # l1 = t y + s x, l2 = s y as Biforms; expansion matches the square sum
    basis = monomial_basis(scroll(1, 1), 1)
    l1 = Biform(1, 1, {(0, 1, 0, 1): 1, (1, 0, 1, 0): 1})
    l2 = Biform(1, 1, {(1, 0, 0, 1): 1})
    rep = representation_from_forms(basis, [l1, l2])
    assert rep.exact and rep.nforms == 2
    f = l1 * l1 + l2 * l2
    assert verify_representation(f, rep) == 0


def test_representation_gram_and_signs():
    basis = monomial_basis(scroll(1, 1), 1)
    rep = Representation(
        basis=basis,
        vectors=[[1, 0, 0, 0], [0, 1, 0, 0]],
        signs=[1, -1],
        exact=True,
    )
    G = rep.gram()
    assert G[0, 0] == 1 and G[1, 1] == -1
    assert rep.is_psd() is False
    assert inertia(G) == (1, 1, 2)  # (positive, negative, zero)


def test_representation_json_roundtrip_exact_and_float():
    basis = monomial_basis(scroll(1, 1), 1)
    exact = Representation(
        basis=basis, vectors=[[Fraction(1, 2), 0, 0, 1]], signs=[1], exact=True
    )
    back = Representation.from_json(exact.to_json())
    assert back.exact and equivalent(exact, back)

    rough = Representation(
        basis=basis, vectors=[[0.5, 0.0, 0.0, 1.0]], signs=[1], exact=False
    )
    back2 = Representation.from_json(rough.to_json())
    assert not back2.exact and equivalent(rough, back2)


def test_equivalent_detects_gauge_rotation():
    # rotating the pair (p, q) leaves p^2 + q^2 and hence the Gram fixed
    basis = monomial_basis(scroll(1, 1), 1)
    c, s = np.cos(0.7), np.sin(0.7)
    p, q = np.array([1.0, 2.0, 0.0, 1.0]), np.array([0.0, 1.0, 1.0, -1.0])

    def rep_of(vs):
        return Representation(basis=basis, vectors=list(vs), signs=[1] * len(vs))

    rep1 = rep_of([p, q])
    rep2 = rep_of([c * p + s * q, -s * p + c * q])
    assert equivalent(rep1, rep2)
    rep3 = rep_of([p, 2.0 * q])
    assert not equivalent(rep1, rep3)


def test_verify_representation_flags_mismatch():
    basis = monomial_basis(scroll(1, 1), 1)
    rep = Representation(basis=basis, vectors=[[1, 0, 0, 0]], signs=[1], exact=True)
    f = Biform(2, 2, {(0, 2, 0, 2): 1, (2, 0, 2, 0): 1})  # t^2 y^2 + s^2 x^2
    assert verify_representation(f, rep) == 1


def test_extracted_representation_matches_eigenstructure():
    space = _space(scroll(2, 1), seed=5)
    theta = np.zeros(space.kdim)
    G = space.gram_at(theta)
    evals = np.linalg.eigvalsh(G)
    expected_rank = int(np.sum(np.abs(evals) > 1e-9 * np.max(np.abs(evals))))
    rep = extract_representation(space, G)
    assert rep.nforms == expected_rank
    assert verify_representation(space.form, rep) < 1e-9 * float(space.form_norm())
