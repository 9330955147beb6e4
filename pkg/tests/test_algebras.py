import numpy as np
import pytest
from hypothesis import given, strategies as st

from ahv.catalog.algebras import (FAMILIES, PUBLISHED_FAMILIES, build_transform, check_params,
                                  eigen_522, family_ids, instantiate, sample_params,
                                  structure_constraints, transform_s, transform_s_printed)
from ahv.errors import DomainViolation, SamplingExhausted, ShapeMismatch
from ahv.field_algebra import FieldBasis, closure_residual, is_subspace_of, span_rank

CLOSED_FAMILIES = PUBLISHED_FAMILIES + ["2.16", "5.2", "5.4c", "5.8", "5.11", "5.14", "5.19",
                                        "5.22c", "5.24"]


def test_registry_has_every_family():
    for f in CLOSED_FAMILIES + ["5.4", "5.22"]:
        assert f in FAMILIES
    assert family_ids("3.") == PUBLISHED_FAMILIES


def test_a31_entries():
    B = instantiate("3.1", m1=0.0, m2=1.0, t16=0.0)
    E1, E2 = B[0], B[1]
    assert E1[2, 0] == 4j and E1[0, 3] == 1
    assert np.all(np.diag(E1) == 0)
    assert (E2[0, 0], E2[1, 1], E2[2, 2], E2[0, 3]) == (1, 1, 2, 1j)


def test_216_has_seven_fields():
    A = instantiate("2.16")
    assert len(A) == 7 and span_rank(A.fields) == 7


def test_a34_m2_zero_is_subalgebra_of_216():
    B = instantiate("3.4", m1=0.0, m2=0.0, t16=0.0)
    assert is_subspace_of(B, instantiate("2.16")) <= 1e-12


@pytest.mark.parametrize("fam", CLOSED_FAMILIES)
def test_families_close_on_draws(fam):
    for i in range(20):
        assert closure_residual(instantiate(fam, sample_params(fam, seed=7, index=i))) <= 1e-9


@pytest.mark.parametrize("fam", PUBLISHED_FAMILIES)
def test_structure_constraints_hold(fam):
    for i in range(20):
        B = instantiate(fam, sample_params(fam, seed=3, index=i))
        assert structure_constraints(B, 0.5, 0.0) <= 1e-12


def test_printed_families_do_not_close():
    p = {"m2": 0.9, "t7": 0.3, "t8": -0.4, "t16": 0.2}
    assert closure_residual(instantiate("5.4", p)) > 1e-3
    assert closure_residual(instantiate("5.4c", p)) <= 1e-12
    # at m2 = 0 printed and corrected coincide
    p0 = dict(p, m2=0.0)
    assert np.array_equal(instantiate("5.4", p0).fields, instantiate("5.4c", p0).fields)
    q = {"t1": 0.7, "m1": -0.3, "t3": 0.5, "t4": 0.8}
    assert closure_residual(instantiate("5.22", q)) > 1e-3
    assert closure_residual(instantiate("5.22c", q)) <= 1e-12


def test_structure_constraint_examples():
    B = instantiate("3.3", sample_params("3.3", seed=1))
    assert structure_constraints(B, 0.5, 0.0) <= 1e-12
    F = B.fields.copy()
    F[0, 2, 0] += 1
    assert structure_constraints(FieldBasis(F), 0.5, 0.0) == pytest.approx(1.0)
    with pytest.raises(ShapeMismatch):
        structure_constraints(instantiate("2.16"), 0.5, 0.0)
    with pytest.raises(ShapeMismatch):
        structure_constraints(instantiate("5.11", xi=0.3), 0.5, 0.0)


def test_domain_violations():
    with pytest.raises(DomainViolation, match="m2"):
        instantiate("3.1", m1=1.0, m2=0.0, t16=0.0)
    with pytest.raises(DomainViolation, match="alpha"):
        instantiate("5.24", alpha=0.5)
    with pytest.raises(DomainViolation):
        check_params("3.1", {"m1": 1.0})
    with pytest.raises(DomainViolation):
        instantiate("9.9")


@given(st.sampled_from(sorted(FAMILIES)), st.integers(0, 2 ** 32 - 1), st.integers(0, 1000))
def test_sampling_is_deterministic_and_in_range(fam, seed, index):
    a = sample_params(fam, seed=seed, index=index)
    assert a == sample_params(fam, seed=seed, index=index)
    assert all(-2 <= v <= 2 for v in a.values())
    check_params(fam, a, 0.1)


def test_a31_margin_and_distinct_draws():
    assert all(abs(sample_params("3.1", seed=5, index=i)["m2"]) >= 0.1 for i in range(200))
    draws = {tuple(sample_params("3.7", seed=5, index=i).values()) for i in range(100)}
    assert len(draws) == 100


def test_sampling_exhausted():
    with pytest.raises(SamplingExhausted):
        sample_params("5.24", range_=(0.0, 1.0))


def test_transform_examples():
    assert np.array_equal(build_transform("C5.1", lam=0.0), np.eye(4))
    C = build_transform("C5.1", lam=1.0)
    expected = np.eye(4, dtype=complex)
    expected[0, 2] = 1j
    assert np.array_equal(C, expected)
    assert np.allclose(build_transform("D", m3=1.0, m4=0.0), np.eye(4))
    with pytest.raises(DomainViolation):
        build_transform("S", m1=1.0, m3=0.0, m4=0.0)
    with pytest.raises(DomainViolation):
        build_transform("C5.1")


def test_s_normalisation_is_the_same_similarity():
    Sp = transform_s_printed(0.4, 1.3, -0.2)
    S = transform_s(0.4, 1.3, -0.2)
    assert np.allclose(S * Sp[3, 3], Sp)
    assert np.array_equal(S[3], [0, 0, 0, 1])


@pytest.mark.parametrize("tag, kw", [("C5.1", {"lam": 1.7}), ("S", {"m1": 1.2, "m3": 0.3, "m4": -1.1}),
                                     ("D", {"m3": 0.4, "m4": 1.5}),
                                     ("E5.22", {"t1": 1.0, "m1": -0.5, "t3": 0.2, "t4": 0.1})])
def test_transforms_well_conditioned(tag, kw):
    assert np.linalg.cond(build_transform(tag, **kw)) < 1e6


def test_p526_is_a_permutation():
    P = build_transform("P5.26")
    assert sorted(np.abs(P).sum(axis=0)) == [1, 1, 1, 1]


def test_eigen_522_alpha_negative():
    ev, _ = eigen_522(1.0, -0.5, 0.3, 0.4)
    assert ev[0] > 0 > ev[1]
