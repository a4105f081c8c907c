import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circulant_ppt.assembly import BigBlockFamily, CirculantState, SmallBlockFamily, assemble
from circulant_ppt.geometry import Scheme, shift_matrix
from circulant_ppt.linalg import DimsProfile, hermitian_eigenvalues, partial_transpose
from circulant_ppt.ppt import (
    all_masks,
    block_spectrum,
    check_mask,
    dense_ppt_check,
    oracle_compare,
    ppt_check,
    ppt_check_all,
    transform,
    transform_big,
    transform_small,
)
from circulant_ppt.randfam import random_big_family, random_small_family
from circulant_ppt.zoo import ghz, ghz_isotropic, two_param, werner

SMALL_DIMS = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (4, 3), (3, 4)]
BIG_DIMS = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (4, 3)]


def schemes_for(n):
    return [Scheme.sigma()] + [Scheme.xi(k) for k in range(1, n)]


def test_identity_mask_is_noop():
    fam = random_small_family(DimsProfile(3, 3), np.random.default_rng(0))
    out = transform_small(fam, (0, 0))
    for mu, x in fam.blocks.items():
        np.testing.assert_array_equal(out.blocks[mu], x)
    assert oracle_compare(fam, (0, 0)) == 0.0


def test_two_qubit_rule():
    rng = np.random.default_rng(1)
    fam = random_small_family(DimsProfile(2, 2), rng)
    a, b = fam.blocks[(0,)], fam.blocks[(1,)]
    out = transform_small(fam, (1,))
    s = shift_matrix(2)
    np.testing.assert_allclose(out.blocks[(0,)], a * np.eye(2) + b * s)
    np.testing.assert_allclose(out.blocks[(1,)], b * np.eye(2) + a * s)


def test_three_qubit_xi_rule():
    rng = np.random.default_rng(2)
    fam = random_big_family(DimsProfile(2, 3), Scheme.xi(2), rng)
    c, d = fam.blocks
    ones = np.ones((2, 2))
    out = transform_big(fam, (0, 1))
    np.testing.assert_allclose(out.blocks[0], c * np.kron(np.eye(2), ones) + d * np.kron(shift_matrix(2), ones))
    np.testing.assert_allclose(out.blocks[1], d * np.kron(np.eye(2), ones) + c * np.kron(shift_matrix(2), ones))


@given(st.sampled_from(SMALL_DIMS), st.integers(0, 2**20), st.data())
@settings(max_examples=60, deadline=None)
def test_small_rule_matches_dense(dn, seed, data):
    dims = DimsProfile(*dn)
    fam = random_small_family(dims, np.random.default_rng(seed))
    mask = data.draw(st.sampled_from(all_masks(dims.n)))
    assert oracle_compare(fam, mask) <= 1e-12


@given(st.sampled_from(BIG_DIMS), st.integers(0, 2**20), st.data())
@settings(max_examples=60, deadline=None)
def test_big_rule_matches_dense(dn, seed, data):
    dims = DimsProfile(*dn)
    scheme = data.draw(st.sampled_from(schemes_for(dims.n)))
    fam = random_big_family(dims, scheme, np.random.default_rng(seed))
    mask = data.draw(st.sampled_from(all_masks(dims.n)))
    assert oracle_compare(fam, mask) <= 1e-12


@pytest.mark.parametrize("d,n", [(2, 3), (3, 3), (4, 3), (3, 4)])
def test_rules_compose(d, n):
    # Transposing an already transposed family stays exact and is an involution.
    dims = DimsProfile(d, n)
    rng = np.random.default_rng(d * n)
    masks = all_masks(n)
    for fam in [random_small_family(dims, rng)] + [random_big_family(dims, s, rng) for s in schemes_for(n)]:
        rho = assemble(fam)
        for m1 in masks:
            once = transform(fam, m1)
            for m2 in masks:
                twice = transform(once, m2)
                combined = tuple(a ^ b for a, b in zip(m1, m2))
                expected = partial_transpose(rho, dims, (0,) + combined)
                np.testing.assert_allclose(assemble(twice), expected, atol=1e-13)


@pytest.mark.parametrize("d,n", SMALL_DIMS)
def test_spectrum_union(d, n):
    dims = DimsProfile(d, n)
    rng = np.random.default_rng(100 + d * n)
    fams = [random_small_family(dims, rng)]
    if n >= 2:
        fams.append(random_big_family(dims, Scheme.sigma(), rng))
    for fam in fams:
        for mask in all_masks(n):
            dense = hermitian_eigenvalues(partial_transpose(assemble(fam), dims, (0,) + mask))
            np.testing.assert_allclose(block_spectrum(transform(fam, mask)), dense, atol=1e-10)


def test_werner_verdicts():
    assert ppt_check(werner(0.2), (1,))[0]
    assert not ppt_check(werner(0.5), (1,))[0]
    ok, lam = ppt_check(werner(1 / 3), (1,))
    assert ok and abs(lam) < 1e-15


def test_ghz_is_not_ppt():
    ok, lam = ppt_check(ghz(2, 3), (0, 1))
    assert not ok
    assert lam == pytest.approx(-0.5)
    report = ppt_check_all(ghz(2, 3))
    assert not report.fully_ppt
    assert report.min_eigenvalue == pytest.approx(-0.5)


def test_ghz_isotropic_boundary():
    assert ppt_check_all(ghz_isotropic(2, 3, 1 / 5)).fully_ppt
    assert not ppt_check_all(ghz_isotropic(2, 3, 1 / 5 + 1e-6)).fully_ppt


def test_product_state_is_ppt():
    dims = DimsProfile(3, 3)
    fam = SmallBlockFamily.from_blocks(dims, {(0, 0): np.diag([1.0, 0, 0])})
    assert ppt_check_all(fam).fully_ppt


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("c,d", [(1 / 8, 1 / 8), (1 / 8, -1 / 8), (0.0, 0.05), (-0.1, 0.1)])
def test_two_param_block_verdict_agrees_with_dense(n, c, d):
    bound = 1 / 2**n
    state = two_param(n, c * bound * 8, d * bound * 8)
    dims = state.dims
    rho = state.dense()
    for mask in all_masks(n):
        ok, lam = ppt_check(state, mask)
        dense_ok, dense_lam = dense_ppt_check(rho, dims, mask)
        assert ok == dense_ok
        assert lam == pytest.approx(dense_lam, abs=1e-14)


def test_report_contents():
    report = ppt_check_all(ghz(2, 3), oracle=True)
    assert [r.mask for r in report.results] == all_masks(3)
    data = report.to_dict()
    assert data["fully_ppt"] is False
    assert all(m["oracle_deviation"] <= 1e-12 for m in data["masks"])
    assert set(report.result((1, 1)).block_min_eigenvalues) == {"00", "01", "10", "11"}
    assert check_mask(ghz(2, 3), (0, 0)).ppt


def test_mask_validation():
    with pytest.raises(ValueError):
        ppt_check(werner(0.1), (1, 0))
    with pytest.raises(ValueError):
        ppt_check(werner(0.1), (2,))


def test_oracle_size_limit():
    dims = DimsProfile(2, 9)
    fam = SmallBlockFamily.from_blocks(dims, {})
    with pytest.raises(ValueError):
        oracle_compare(fam, (0,) * 8)


def test_transform_accepts_state_wrapper():
    fam = random_big_family(DimsProfile(2, 3), Scheme.sigma(), np.random.default_rng(0))
    out = transform(CirculantState(fam), (1, 0))
    assert isinstance(out, BigBlockFamily)
