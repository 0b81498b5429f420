import numpy as np
import pytest

from braidweight.chen import (
    Cell,
    CycleSpec,
    IntegrandSpec,
    check_four_term_functional,
    general_invariant,
    integrate_phi_over_boundary,
    integrate_wedge_sum_over_cell,
    linking_number,
    order2_integrand,
    order2_invariant,
    phi123_value,
    random_cell,
    stokes_defect,
)
from braidweight.curves import borromean_rings, hopf_link, split_unlink
from braidweight.errors import SingularityError
from braidweight.quadrature import QuadratureConfig

FAST = QuadratureConfig(gl_nodes=24, mc_samples=150_000, rng_seed=5)

X123 = (np.array([0.0, 0.0, 0.0]), np.array([1.2, 0.1, -0.3]),
        np.array([0.3, 1.1, 0.8]))


def _random_legs(rng):
    return rng.standard_normal((3, 3, 3))


def test_phi_translation_invariance():
    rng = np.random.default_rng(2)
    legs = _random_legs(rng)
    v0, e0 = phi123_value(*X123, legs, FAST)
    shift = np.array([0.7, -0.4, 1.3])
    v1, e1 = phi123_value(*(x + shift for x in X123), legs, FAST)
    assert abs(v0 - v1) < 3.0 * (e0 + e1)


def test_phi_alternating_in_legs():
    rng = np.random.default_rng(3)
    legs = _random_legs(rng)
    legs[1] = legs[0]  # two equal legs kill an alternating 3-form
    v, err = phi123_value(*X123, legs, FAST)
    assert abs(v) < 1e-15


def test_phi_antisymmetry_under_leg_swap():
    rng = np.random.default_rng(4)
    legs = _random_legs(rng)
    swapped = legs[[1, 0, 2]]
    v0, _ = phi123_value(*X123, legs, FAST)
    v1, _ = phi123_value(*X123, swapped, FAST)
    assert abs(v0 + v1) < 1e-12 * max(1.0, abs(v0))


def test_phi_rejects_coincident_points():
    with pytest.raises(SingularityError):
        phi123_value(X123[0], X123[0], X123[2], np.zeros((3, 3, 3)), FAST)


def test_phi_determinism():
    rng = np.random.default_rng(5)
    legs = _random_legs(rng)
    v0, e0 = phi123_value(*X123, legs, FAST)
    v1, e1 = phi123_value(*X123, legs, FAST)
    assert v0 == v1 and e0 == e1


def test_degenerate_cell_gives_zero():
    cell = Cell(tuple(map(tuple, np.array(X123))), ((( 0.0,) * 3,) * 3,) * 4)
    assert integrate_wedge_sum_over_cell(cell, FAST) == 0.0


def test_stokes_defect_single_cell():
    rng = np.random.default_rng(6)
    cell = random_cell(rng)
    result = stokes_defect(cell, QuadratureConfig(
        gl_nodes=10, mc_samples=400_000, rng_seed=11))
    # loose bound at reduced samples; the acceptance suite runs 5 cells
    # at full budget against the 5% criterion
    assert result["defect"] < max(
        0.15 * abs(result["cell_integral"]), 6.0 * result["boundary_stderr"])


def test_order2_split_unlink_vanishes():
    link = split_unlink(3, 12.0)
    res = order2_invariant(link, FAST)
    assert abs(res.i1) < 1e-9
    assert abs(res.value) <= res.error_budget + 1e-9


def test_order2_borromean_nonzero_and_deterministic():
    link = borromean_rings()
    res = order2_invariant(link, FAST)
    res2 = order2_invariant(link, FAST)
    assert res.value == res2.value
    assert abs(res.value) > 3.0 * res.error_budget
    assert res.label == "invariant"


def test_order2_requires_three_components():
    with pytest.raises(ValueError):
        order2_invariant(hopf_link(), FAST)


def test_four_term_check_accepts_order2_and_lk():
    check_four_term_functional(order2_integrand(), 3)
    check_four_term_functional(IntegrandSpec(((1, ((1, 2),)),)), 2)


def test_four_term_check_rejects_and_names_generator():
    bad = IntegrandSpec(((1, ((1, 2), (2, 3))),))  # single word of the cyclic sum
    with pytest.raises(ValueError, match=r"X12\*X13"):
        check_four_term_functional(bad, 3)


def test_general_invariant_specializes_to_linking_number():
    h = hopf_link()
    cyc = CycleSpec.standard(2)
    res = general_invariant(h, IntegrandSpec(((1, ((1, 2),)),)), cyc, FAST)
    lk = linking_number(h.components[0], h.components[1], FAST)
    assert abs(res.value - lk) < 1e-12
    assert res.label == "invariant"


def test_general_invariant_specializes_to_order2():
    link = borromean_rings()
    cyc = CycleSpec.standard(3)
    res = general_invariant(link, order2_integrand(), cyc, FAST)
    direct = order2_invariant(link, FAST)
    assert abs(res.i1 - direct.i1) < 1e-12
    assert abs(res.i2 - direct.i2) < 1e-12
    assert res.label == "invariant"


def test_general_invariant_labels_higher_order_leading():
    from braidweight.chen import CycleFactor

    link = split_unlink(3, 12.0)
    # the indicator of X12*X12*X12 annihilates every padded relation (all
    # relation terms contain a chord other than (1,2)), so it passes 4T;
    # at word length 3 only leading terms are evaluated
    ig = IntegrandSpec(((1, ((1, 2), (1, 2), (1, 2))),))
    cyc = CycleSpec((CycleFactor(1, (2, 3)), CycleFactor(1, (2,))))
    res = general_invariant(link, ig, cyc, FAST)
    assert res.label == "leading-order (not invariant)"
