import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qso
from qso import (
    Distribution,
    Genotype,
    HeredityTensor,
    MeasureFamily,
    ReducedDistribution,
    apply_canonical,
    apply_reduced,
    build_space,
    fold,
    lift,
    mendelian_coefficients,
    nonmendelian_coefficients,
    validate_pq,
)
from qso.errors import (
    AsymmetricMeasure,
    ChildAsymmetry,
    DimensionMismatch,
    DistributionOutsideHyperSimplex,
    GenderAsymmetric,
    MissingPair,
    NotOneToOne,
    ZeroMassOffspringSet,
)
from qso.operators import reduce as reduce_tensor

from helpers import (
    random_hyper_point,
    random_pq_tensor,
    random_simplex,
    random_symmetric_family,
    rng,
)

TRAIT = build_space([["A", "a"]])


def trait_mu0(alpha):
    return Distribution(TRAIT, [alpha, 0.5 - alpha, alpha, 0.5 - alpha])


fA, fa = Genotype("f", (0,)), Genotype("f", (1,))
mA, ma = Genotype("m", (0,)), Genotype("m", (1,))


# --- mendelian coefficients --------------------------------------------------

def test_mendelian_same_trait_pair():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.1))
    assert t.coefficient(fA, mA, fA) == pytest.approx(1.0, abs=1e-15)
    assert t.coefficient(fA, mA, mA) == pytest.approx(1.0, abs=1e-15)
    assert t.coefficient(fA, mA, fa) == 0.0


def test_mendelian_mixed_trait_pair():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.1))
    # full offspring set: child gets 2 * mu0 / 1
    assert t.coefficient(fA, ma, fa) == pytest.approx(0.8, abs=1e-15)
    assert t.coefficient(fA, ma, fA) == pytest.approx(0.2, abs=1e-15)


def test_mendelian_same_gender_pairs_are_zero():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.1))
    for child in (fA, fa, mA, ma):
        assert t.full_coefficient(fA, fa, child) == 0.0
        assert t.full_coefficient(mA, ma, child) == 0.0


def test_mendelian_pair_sums_are_two():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.3))
    sums = t.coefficients.sum(axis=2)
    assert np.allclose(sums, 2.0, atol=1e-12)


def test_mendelian_support_is_offspring_set():
    space = build_space([["1", "2", "3"]])
    mu0 = Distribution(space, np.full(6, 1.0 / 6.0))
    t = mendelian_coefficients(space, mu0)
    for i in range(3):
        for j in range(3):
            members = qso.mendelian_offspring_set(
                space, Genotype("f", (i,)), Genotype("m", (j,))
            )
            outside = [s for s in range(6) if s not in members]
            assert np.all(t.coefficients[i, j, outside] == 0.0)
            assert np.all(t.coefficients[i, j, sorted(members)] > 0.0)


def test_mendelian_zero_mass_offspring_set():
    mu0 = Distribution(TRAIT, [0.0, 0.5, 0.0, 0.5])
    with pytest.raises(ZeroMassOffspringSet):
        mendelian_coefficients(TRAIT, mu0)


def test_mendelian_asymmetric_measure_rejected():
    mu0 = Distribution(TRAIT, [0.1, 0.4, 0.2, 0.3])
    with pytest.raises(AsymmetricMeasure):
        mendelian_coefficients(TRAIT, mu0)


# --- non-mendelian coefficients ----------------------------------------------

def test_nonmendelian_rh_examples():
    family = qso.rh_measure_family()
    t = nonmendelian_coefficients(family.space, family)
    plus, minus = Genotype("f", (0,)), Genotype("f", (1,))
    mplus, mminus = Genotype("m", (0,)), Genotype("m", (1,))
    assert t.coefficient(plus, mplus, mminus) == pytest.approx(0.015, abs=1e-15)
    assert t.coefficient(minus, mminus, minus) == pytest.approx(0.9, abs=1e-15)


def test_nonmendelian_uniform_family():
    space = build_space([["1", "2", "3"]])
    t = nonmendelian_coefficients(space, MeasureFamily.uniform(space))
    assert np.allclose(t.coefficients, 1.0 / space.m, atol=1e-15)


def test_nonmendelian_missing_pair():
    space = build_space([["A", "a"]])
    family = MeasureFamily.from_dict(space, {(0, 0): [0.25, 0.25, 0.25, 0.25]})
    with pytest.raises(MissingPair):
        nonmendelian_coefficients(space, family)


def test_nonmendelian_asymmetric_family():
    space = build_space([["A", "a"]])
    row = [0.3, 0.2, 0.2, 0.3]
    family = MeasureFamily.from_dict(
        space, {(i, j): row for i in range(2) for j in range(2)}
    )
    with pytest.raises(AsymmetricMeasure):
        nonmendelian_coefficients(space, family)


# --- validate_pq --------------------------------------------------------------

def test_validate_mendelian_tensor_is_clean():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.2))
    assert validate_pq(t, tol=1e-9).ok


def test_validate_flags_exactly_the_perturbed_pair():
    family = random_symmetric_family(rng(7), build_space([["1", "2", "3"]]))
    t = nonmendelian_coefficients(family.space, family)
    coeffs = t.coefficients.copy()
    coeffs[1, 2, 0] += 0.1
    bad = HeredityTensor(t.space, t.p_ratio, coeffs, t.support)
    report = validate_pq(bad, tol=1e-6)
    assert not report.ok
    kinds = sorted(v.kind for v in report.violations)
    assert kinds == ["normalization", "ratio"]
    assert all(v.pair == (1, 2) for v in report.violations)


def test_validate_flags_support_violations():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.2))
    coeffs = t.coefficients.copy()
    # pair (A, A) may not produce an 'a' child; put mass there
    coeffs[0, 0, TRAIT.index(fa)] += 0.05
    coeffs[0, 0, TRAIT.index(ma)] += 0.05
    bad = HeredityTensor(t.space, t.p_ratio, coeffs, t.support)
    kinds = {v.kind for v in validate_pq(bad, tol=1e-6).violations}
    assert "support" in kinds


def test_validate_published_tables_tolerances():
    rh = qso.rh_measure_family()
    t_rh = nonmendelian_coefficients(rh.space, rh)
    # the Rh rows are exact as printed
    assert validate_pq(t_rh, tol=1e-9).ok
    abo = qso.abo_measure_family()
    t_abo = nonmendelian_coefficients(abo.space, abo)
    # four ABO rows sum to 0.9998: fine at 1e-3, flagged at 1e-6
    assert validate_pq(t_abo, tol=1e-3).ok
    flagged = validate_pq(t_abo, tol=1e-6)
    assert not flagged.ok
    assert {v.kind for v in flagged.violations} == {"normalization"}


def test_validate_random_pq_tensors_are_clean():
    gen = rng(11)
    for p in (0.3, 0.5, 0.7):
        t = random_pq_tensor(gen, build_space([["a", "b", "c"]]), p)
        assert validate_pq(t, tol=1e-9).ok


# --- apply_canonical -----------------------------------------------------------

def test_apply_canonical_identity_at_quarter():
    # the identity regime lives on the gender-symmetric slice; every image
    # is mirror-symmetric, so from the second application onward the map
    # is the identity for arbitrary starts as well
    t = mendelian_coefficients(TRAIT, trait_mu0(0.25))
    gen = rng(3)
    for _ in range(20):
        lam = lift(TRAIT, ReducedDistribution(random_simplex(gen, 2)))
        out = apply_canonical(t, lam)
        assert np.allclose(out.values, lam.values, atol=1e-15)
    for _ in range(20):
        lam = random_hyper_point(gen, TRAIT, 0.5)
        once = apply_canonical(t, lam)
        twice = apply_canonical(t, once)
        assert np.allclose(twice.values, once.values, atol=1e-15)


def test_apply_canonical_rh_uniform():
    family = qso.rh_measure_family()
    t = nonmendelian_coefficients(family.space, family)
    out = apply_canonical(t, Distribution.uniform(family.space))
    assert out.values == pytest.approx([0.2982, 0.2018, 0.2982, 0.2018], abs=1e-12)


def test_apply_canonical_trait_vertex_fixed_point():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.1))
    lam = Distribution(TRAIT, [0.5, 0.0, 0.5, 0.0])
    out = apply_canonical(t, lam)
    assert np.allclose(out.values, lam.values, atol=1e-15)


def test_apply_canonical_ratio_mismatch():
    t = mendelian_coefficients(TRAIT, trait_mu0(0.1))
    lam = random_hyper_point(rng(4), TRAIT, 0.3)
    with pytest.raises(DistributionOutsideHyperSimplex):
        apply_canonical(t, lam)


def test_hyper_simplex_invariance_small():
    gen = rng(5)
    space = build_space([["u", "v", "w"]])
    for p in (0.3, 0.5, 0.7):
        for _ in range(10):
            t = random_pq_tensor(gen, space, p)
            lam = random_hyper_point(gen, space, p)
            out = apply_canonical(t, lam)
            assert abs(out.values.sum() - 1.0) < 1e-9
            assert abs(out.female.sum() - p) < 1e-9


def test_child_ratio_of_canonical_image():
    # mirror children of the image sit in exact p:q proportion
    gen = rng(6)
    space = build_space([["a", "b"]])
    t = random_pq_tensor(gen, space, 0.7)
    lam = random_hyper_point(gen, space, 0.7)
    out = apply_canonical(t, lam)
    assert np.allclose(0.3 * out.female, 0.7 * out.male, atol=1e-12)
    # 1:1 case: mirror children are equal
    t = random_pq_tensor(gen, space, 0.5)
    lam = random_hyper_point(gen, space, 0.5)
    out = apply_canonical(t, lam)
    assert np.abs(out.female - out.male).max() <= 1e-12


# --- reduce / apply_reduced -----------------------------------------------------

def test_reduce_rh_coefficients():
    family = qso.rh_measure_family()
    q = reduce_tensor(nonmendelian_coefficients(family.space, family))
    assert q.p[0, 0, 0] == pytest.approx(0.985, abs=1e-15)
    assert q.p[0, 1, 0] + q.p[1, 0, 0] == pytest.approx(2 * 0.6503, abs=1e-12)
    assert q.p[1, 1, 0] == pytest.approx(0.1, abs=1e-15)


def test_reduce_identity_trait():
    q = reduce_tensor(mendelian_coefficients(TRAIT, trait_mu0(0.25)))
    assert q.p[0, 0, 0] == pytest.approx(1.0, abs=1e-15)
    assert q.p[0, 1, 0] == pytest.approx(0.5, abs=1e-15)
    assert q.p[1, 1, 0] == pytest.approx(0.0, abs=1e-15)


def test_reduce_multi_allele_weights():
    space = build_space([["1", "2", "3", "4"]])
    alphas = np.array([0.2, 0.15, 0.1, 0.05])
    mu0 = Distribution(space, np.concatenate([alphas, alphas]))
    q = reduce_tensor(mendelian_coefficients(space, mu0))
    for i in range(4):
        assert q.p[i, i, i] == pytest.approx(1.0, abs=1e-15)
        for j in range(4):
            if i != j:
                assert q.p[i, j, i] == pytest.approx(
                    alphas[i] / (alphas[i] + alphas[j]), abs=1e-15
                )
    assert np.allclose(q.p.sum(axis=2), 1.0, atol=1e-12)


def test_reduce_requires_one_to_one():
    t = random_pq_tensor(rng(8), build_space([["a", "b"]]), 0.3)
    with pytest.raises(NotOneToOne):
        reduce_tensor(t)


def test_reduce_rejects_child_asymmetry():
    space = build_space([["x"]])
    t = HeredityTensor(space, (0.5, 0.5), np.array([[[1.2, 0.8]]]))
    with pytest.raises(ChildAsymmetry):
        reduce_tensor(t)


def test_apply_reduced_vertex_fixed():
    q = qso.multi_allele([0.2, 0.15, 0.1, 0.05])
    vertex = ReducedDistribution([0.0, 1.0, 0.0, 0.0])
    out = apply_reduced(q, vertex)
    assert np.array_equal(out.values, vertex.values)


def test_apply_reduced_rh_midpoint():
    q, _ = qso.rh_model()
    out = apply_reduced(q, ReducedDistribution([0.5, 0.5]))
    assert out.values[0] == pytest.approx(0.5964, abs=1e-12)


def test_apply_reduced_abo_near_published_fixed_point():
    q, _ = qso.abo_model()
    y = ReducedDistribution([0.084, 0.516, 0.058, 0.342])
    out = apply_reduced(q, y)
    assert np.abs(out.values - y.values).max() < 5e-3


def test_apply_reduced_dimension_mismatch():
    q, _ = qso.rh_model()
    with pytest.raises(DimensionMismatch):
        apply_reduced(q, ReducedDistribution([0.5, 0.25, 0.25]))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_apply_reduced_stays_on_simplex(n, seed):
    gen = rng(seed)
    floor = 0.0
    p = np.empty((n, n, n))
    for i in range(n):
        for j in range(i, n):
            row = gen.dirichlet(np.ones(n))
            p[i, j] = p[j, i] = row
    q = qso.ReducedQso(n, p)
    y = ReducedDistribution(random_simplex(gen, n))
    out = apply_reduced(q, y)
    assert abs(out.values.sum() - 1.0) <= n * n * np.finfo(float).eps
    assert out.values.min() >= 0.0


# --- lift / fold ----------------------------------------------------------------

def test_lift_fold_examples():
    space = build_space([["A", "a"]])
    lam = lift(space, ReducedDistribution([1.0, 0.0]))
    assert np.array_equal(lam.values, [0.5, 0.0, 0.5, 0.0])
    abo_space = build_space([["A", "B", "AB", "O"]])
    lam = Distribution(
        abo_space,
        [0.042, 0.258, 0.029, 0.171, 0.042, 0.258, 0.029, 0.171],
    )
    y = fold(abo_space, lam)
    assert y.values == pytest.approx([0.084, 0.516, 0.058, 0.342], abs=1e-15)


def test_lift_fold_roundtrip_is_exact():
    gen = rng(9)
    space = build_space([["1", "2", "3", "4", "5"]])
    for _ in range(1000):
        y = random_simplex(gen, 5)
        back = fold(space, lift(space, ReducedDistribution(y)))
        assert np.array_equal(back.values, y)


def test_fold_rejects_asymmetric():
    space = build_space([["A", "a"]])
    lam = Distribution(space, [0.3, 0.2, 0.25, 0.25])
    with pytest.raises(GenderAsymmetric):
        fold(space, lam)


# --- reduction equivalence -------------------------------------------------------

def test_reduction_equivalence_small():
    gen = rng(10)
    for _ in range(50):
        space = build_space([[f"t{k}" for k in range(int(gen.integers(2, 5)))]])
        family = random_symmetric_family(gen, space)
        t = nonmendelian_coefficients(space, family)
        q = reduce_tensor(t)
        y = ReducedDistribution(random_simplex(gen, space.m))
        via_full = fold(space, apply_canonical(t, lift(space, y)))
        via_reduced = apply_reduced(q, y)
        assert np.abs(via_full.values - via_reduced.values).max() < 1e-12
