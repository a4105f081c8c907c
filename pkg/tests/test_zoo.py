import numpy as np
import pytest

from circulant_ppt.assembly import extract_small, is_valid_state
from circulant_ppt.linalg import DimsProfile
from circulant_ppt.ppt import ppt_check_all
from circulant_ppt.zoo import (
    ZOO,
    bell_state,
    bell_vector,
    build,
    ghz,
    ghz_isotropic,
    isotropic2,
    o2_state,
    two_param,
    w_state,
    werner,
)


def ghz_vector(d, n):
    psi = np.zeros(d**n)
    for k in range(d):
        psi[sum(k * d**j for j in range(n))] = 1
    return psi / np.sqrt(d)


def test_isotropic2_dense_definition():
    p = 0.3
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    expected = p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4
    np.testing.assert_allclose(isotropic2(p).dense(), expected, atol=1e-16)


@pytest.mark.parametrize("d,n", [(2, 3), (2, 4), (3, 2), (3, 3), (4, 2)])
def test_ghz_isotropic_dense_definition(d, n):
    s = 0.37
    g = ghz_vector(d, n)
    expected = s * np.outer(g, g) + (1 - s) * np.eye(d**n) / d**n
    np.testing.assert_allclose(ghz_isotropic(d, n, s).dense(), expected, atol=1e-16)
    np.testing.assert_allclose(ghz(d, n).dense(), np.outer(g, g), atol=1e-16)


def test_ghz_isotropic_three_qubit_blocks():
    s = 0.2
    blocks = ghz_isotropic(2, 3, s).payload.blocks
    np.testing.assert_allclose(blocks[(0, 0)], np.array([[1 + 3 * s, 4 * s], [4 * s, 1 + 3 * s]]) / 8)
    for mu in [(0, 1), (1, 0), (1, 1)]:
        np.testing.assert_allclose(blocks[mu], (1 - s) / 8 * np.eye(2))


@pytest.mark.parametrize("d,n", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_bell_states_match_vectors(d, n):
    from circulant_ppt.geometry import all_dinaries

    for alpha in range(d):
        for nu in all_dinaries(d, n - 1):
            psi = bell_vector(d, n, alpha, nu)
            np.testing.assert_allclose(bell_state(d, n, alpha, nu).dense(), np.outer(psi, psi.conj()),
                                       atol=1e-15)


def test_o2_region_corners():
    assert ppt_check_all(o2_state(1 / 3, 1 / 3)).fully_ppt
    assert not ppt_check_all(o2_state(0.0, 0.6)).fully_ppt
    assert not ppt_check_all(o2_state(0.0, 0.4)).fully_ppt  # c = 0.6
    with pytest.raises(ValueError):
        o2_state(0.5, 0.6)


def test_two_param_three_qubit_layout():
    c, d = 0.05, -0.1
    rho = two_param(3, c, d).dense() * 8
    expected = np.eye(8)
    expected[0, 7] = expected[7, 0] = expected[1, 6] = expected[6, 1] = 1
    expected[2, 5] = expected[5, 2] = c
    expected[3, 4] = expected[4, 3] = d
    np.testing.assert_allclose(rho, expected, atol=1e-15)


def test_two_param_four_qubit_label_ranges():
    blocks = two_param(4, 0.01, 0.02).payload.blocks
    offs = [blocks[mu][0, 1] * 16 for mu in sorted(blocks)]
    np.testing.assert_allclose(offs, [1, 1, 1, 1, 0.01, 0.01, 0.01, 0.02])


def test_ranges_enforced():
    with pytest.raises(ValueError):
        werner(1.1)
    with pytest.raises(ValueError):
        ghz_isotropic(2, 3, -0.2)
    with pytest.raises(ValueError):
        two_param(3, 0.2, 0.0)
    with pytest.raises(ValueError):
        bell_state(2, 3, 0, (0,))


def test_w_state_not_circulant():
    from circulant_ppt.assembly import NotCirculantError

    assert np.trace(w_state()) == pytest.approx(1)
    with pytest.raises(NotCirculantError):
        extract_small(w_state(), DimsProfile(2, 3))


@pytest.mark.parametrize("name", sorted(ZOO))
def test_registry_builds_valid_states(name):
    spec = ZOO[name]
    sample = {"werner": {"p": 0.1}, "isotropic2": {"p": 0.1}, "o2": {"a": 0.2, "b": 0.3},
              "ghz": {}, "bell": {"nu": (1,)}, "ghz_isotropic": {"s": 0.1},
              "two_param": {"c": 0.01, "d": 0.02}}[name]
    state = spec.build(**sample)
    assert is_valid_state(state)
    assert state.name == name


def test_registry_thresholds_match_closed_forms():
    assert ZOO["werner"].expected_threshold() == pytest.approx(1 / 3)
    assert ZOO["ghz_isotropic"].expected_threshold(d=3, n=3) == pytest.approx(1 / 10)
    assert ZOO["ghz"].expected_threshold() is None


def test_build_errors():
    with pytest.raises(ValueError, match="unknown zoo family"):
        build("nope")
    with pytest.raises(ValueError, match="needs parameter"):
        build("werner")
    with pytest.raises(ValueError, match="no parameter"):
        build("werner", p=0.1, q=2)
