import math

import numpy as np
import pytest

import coinwalk as cw


def test_fourier_and_baker_are_unitary():
    f = cw.fourier_matrix(6, 0.5, 0.5)
    assert np.allclose(f.conj().T @ f, np.eye(6), atol=1e-12)
    b = cw.BakerMap(cw.BakerSpec.qubit(3, 2, 0.5, 0.5)).dense()
    assert cw.unitarity_defect(b) < 1e-10
    h = cw.BakerMap(cw.BakerSpec.qubit(1, 1)).dense()
    assert np.allclose(h, np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def test_hadamard_walk_first_step():
    state = cw.init_state(64, "zero", 2)
    state = cw.evolve(state, 1, cw.BakerMap(cw.BakerSpec.qubit(1, 1)))
    p = np.array(cw.position_distribution(state))
    assert p[1] == pytest.approx(0.5)
    assert p[-1] == pytest.approx(0.5)
    assert cw.position_variance(list(p)) == pytest.approx(1.0)


def test_sector_evolution_matches_oracle():
    spec = cw.BakerSpec.qubit(2, 1, 0.5, 0.5)
    coin = np.full(4, 0.5, dtype=complex)
    state = cw.evolve(cw.init_state_vector(4, coin), 5, cw.BakerMap(spec))
    oracle = cw.dense_oracle_evolve(4, coin, spec, 5)
    assert np.max(np.abs(cw.position_vector(state) - oracle)) < 1e-10


def test_entropies_and_wigner():
    m = cw.BakerMap(cw.BakerSpec.qubit(3, 1, 0.5, 0.5))
    state = cw.evolve(cw.init_state(8, "plus_i", 8), 6, m)
    sl, sv = cw.linear_entropy(state), cw.von_neumann_entropy(state)
    assert 0.0 <= sl <= sv + 1e-9
    w = cw.wigner(state)
    assert w.shape == (16, 16)
    assert w.sum() == pytest.approx(2.0)
    p = np.array(cw.position_distribution(state))
    assert np.allclose(w[::2].sum(axis=1), 2 * p, atol=1e-10)
    assert cw.classical_grid(8, 6).sum() == pytest.approx(2.0)


def test_run_config_and_errors():
    text = cw.preset_text("fig7").replace("t_max = 31", "t_max = 4").replace("grid_times = 0, 31", "")
    rows = cw.run(text)
    assert len(rows) == 7
    times, values = rows[0]["wigner_distance"]
    assert list(times) == [0, 1, 2, 3, 4]
    assert all(v >= 0 for v in values)
    with pytest.raises(ValueError):
        cw.BakerMap(cw.BakerSpec.qubit(3, 4))
    with pytest.raises(ValueError):
        cw.run("[x]\nexperiment = entropy\n")
    with pytest.raises(ArithmeticError):
        cw.run("[w]\nexperiment = wigner\nring_size = 128\ncoins = plus_i\nmembers = 3/1\nt_max = 1\n")
