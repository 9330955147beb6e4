import numpy as np
import pytest

from ahv.catalog.algebras import PUBLISHED_FAMILIES, instantiate, sample_params
from ahv.errors import NoConvergence, ShapeMismatch
from ahv.field_algebra import closure_residual
from ahv.verification.closure_system import (N_UNKNOWNS, bracket_residual, closure_system,
                                             fields_from_unknowns, local_solve_closure,
                                             perturbation_trials, residual_norm,
                                             unknowns_from_fields)


def test_equation_counts():
    s = closure_system()
    assert (s.n_pairs, s.complex_equations, s.real_equations) == (10, 120, 240)
    assert s.n_real_unknowns == 2 * N_UNKNOWNS


def test_zero_assignment_residual_is_zero():
    s = closure_system()
    assert residual_norm(s, np.zeros(s.n_real_unknowns)) == 0.0


@pytest.mark.parametrize("fam", PUBLISHED_FAMILIES)
def test_family_instances_solve_the_system(fam):
    s = closure_system()
    for k in range(5):
        B = instantiate(fam, sample_params(fam, seed=42, index=k))
        z = unknowns_from_fields(B.fields)
        np.testing.assert_array_equal(fields_from_unknowns(z), B.fields)
        assert residual_norm(s, s.free_part(z)) <= 1e-10


def test_residual_agrees_with_closure_residual(rng):
    z = rng.normal(size=N_UNKNOWNS) + 1j * rng.normal(size=N_UNKNOWNS)
    F = fields_from_unknowns(z)
    assert np.linalg.norm(bracket_residual(F)) > 1e-3
    B = instantiate("3.1", m1=0.3, m2=-1.1, t16=0.4)
    assert np.linalg.norm(bracket_residual(B.fields)) <= 1e-12
    assert closure_residual(B) <= 1e-12


def test_template_shape_enforced():
    F = instantiate("2.16").fields
    with pytest.raises(ShapeMismatch):
        unknowns_from_fields(F)
    with pytest.raises(ShapeMismatch):
        closure_system(mask=np.ones(3, bool))


def test_recovery_from_perturbations():
    B = instantiate("3.2", sample_params("3.2", seed=42))
    trials = perturbation_trials(B, seed=42, trials=5, tag="3.2")
    assert sum(ok and r <= 1e-8 for ok, r, _ in trials) >= 4


def test_masked_system_keeps_fixed_entries():
    B = instantiate("3.5", sample_params("3.5", seed=1))
    z = unknowns_from_fields(B.fields)
    mask = np.zeros(N_UNKNOWNS, bool)
    mask[:6] = True                          # only the a/b rows of E1 are free
    s = closure_system(mask, z)
    x0 = s.free_part(z) + 1e-3
    res = local_solve_closure(s, x0)
    assert res.residual <= 1e-8
    np.testing.assert_array_equal(s.assemble(res.x)[6:], z[6:])


def test_no_convergence_raised():
    s = closure_system()
    with pytest.raises(NoConvergence):
        local_solve_closure(s, np.full(s.n_real_unknowns, 5.0), max_iter=1)
