"""Test mass transfer, elimination and merging."""

import numpy as np
import pytest

from pysbrd.core import RandomSource, make_swarm
from pysbrd.mass import (TransferFractions, apply_transfer, eliminate_light,
                         merge_close, relative_masses, transfer_fractions)

EPS = 1e-12


######################################################################
# transfer fractions

def test_transfer_fractions():

  eta = transfer_fractions([0.0, 1.0], 2, EPS).eta
  assert eta[0] == 0.0
  np.testing.assert_allclose(eta[1], (1.0/(1.0 + EPS))**2, rtol=1e-15)

  eta = transfer_fractions([0.0, 0.5, 1.0], 2, EPS).eta
  np.testing.assert_allclose(eta, [0.0, 0.25, 1.0], rtol=1e-10)

  for q in (1, 2, 8):
    np.testing.assert_array_equal(transfer_fractions([3.0, 3.0, 3.0], q, EPS).eta, 0.0)


def test_transfer_fractions_order():

  f = np.array([2.0, -1.0, 5.0, 2.0, 0.5])
  eta = transfer_fractions(f, 4, EPS).eta
  assert eta[1] == 0.0
  assert eta[0] == eta[3]
  assert np.all(np.diff(eta[np.argsort(f)]) >= 0.0)
  assert np.all((eta >= 0.0) & (eta <= 1.0))


def test_transfer_fractions_invalid():

  with pytest.raises(FloatingPointError):
    transfer_fractions([0.0, np.nan], 2, EPS)
  with pytest.raises(ValueError):
    transfer_fractions([], 2, EPS)


def test_apply_transfer():

  swarm = make_swarm([[0.0], [1.0]], [0.5, 0.5], [0.0, 1.0])

  out = apply_transfer(swarm, TransferFractions(np.array([0.0, 1.0])))
  np.testing.assert_allclose(out.masses, [1.0, 0.0])

  out = apply_transfer(swarm, [0.0, 0.25])
  np.testing.assert_allclose(out.masses, [0.625, 0.375])
  assert out.heaviest_index == 0

  out = apply_transfer(swarm, [0.0, 0.0])
  np.testing.assert_array_equal(out.masses, swarm.masses)

  # the input is left alone
  np.testing.assert_array_equal(swarm.masses, [0.5, 0.5])

  with pytest.raises(ValueError):
    apply_transfer(swarm, [0.0, 0.1, 0.2])


######################################################################
# elimination

def test_eliminate_borderline_kept():

  swarm = make_swarm([[0.0], [1.0]], [0.99995, 0.00005], [0.0, 1.0])
  out = eliminate_light(swarm, 1e-4, 2)
  assert out.n_active == 2
  np.testing.assert_array_equal(out.masses, swarm.masses)


def test_eliminate_light():

  swarm = make_swarm([[0.0], [1.0], [2.0]], [0.9999 - 1e-6, 1e-6, 1e-4], [0.0, 1.0, 2.0])
  out = eliminate_light(swarm, 1e-4, 3)
  np.testing.assert_array_equal(out.active, [True, False, True])
  np.testing.assert_allclose(out.masses[0], 0.9999, rtol=1e-15)
  assert out.masses[1] == 0.0
  np.testing.assert_allclose(out.total_mass(), 1.0, rtol=1e-15)


def test_eliminate_spares_minimizer():

  swarm = make_swarm([[0.0]], [1.0], [0.0])
  out = eliminate_light(swarm, 1e-4, 1)
  assert out.n_active == 1 and out.masses[0] == 1.0

  swarm = make_swarm([[0.0], [1.0]], [1e-9, 1.0 - 1e-9], [-1.0, 1.0])
  out = eliminate_light(swarm, 1e-4, 2)
  assert out.n_active == 2


######################################################################
# merging

def test_merge_pair():

  swarm = make_swarm([[0.0, 0.0], [1e-4, 0.0]], [0.3, 0.7], [5.0, 7.0])
  out = merge_close(swarm, 1e-3)
  np.testing.assert_array_equal(out.active, [True, False])
  np.testing.assert_array_equal(out.positions[0], [0.0, 0.0])
  np.testing.assert_allclose(out.masses[0], 1.0, rtol=1e-15)
  assert out.minimizer_index == 0 and out.heaviest_index == 0


def test_merge_far_apart():

  swarm = make_swarm([[0.0], [1.0], [2.0]], [0.2, 0.3, 0.5], [1.0, 2.0, 3.0])
  out = merge_close(swarm, 1e-3)
  np.testing.assert_array_equal(out.active, swarm.active)
  np.testing.assert_array_equal(out.masses, swarm.masses)


def test_merge_colocated():

  swarm = make_swarm([[1.0, 1.0]]*3, [0.2, 0.3, 0.5], [2.0, 1.0, 1.0])
  out = merge_close(swarm, 1e-3)
  assert out.n_active == 1
  # lowest F, lowest index on ties
  assert out.active[1]
  np.testing.assert_allclose(out.total_mass(), 1.0, rtol=1e-15)


######################################################################
# relative masses

def test_relative_masses():

  swarm = make_swarm([[0.0], [1.0]], [0.2, 0.8], [0.0, 1.0])
  np.testing.assert_allclose(relative_masses(swarm), [0.25, 1.0])

  swarm = make_swarm([[0.0], [1.0], [2.0]], [1/3, 1/3, 1/3], [0.0, 1.0, 2.0])
  np.testing.assert_array_equal(relative_masses(swarm), 1.0)

  swarm = make_swarm([[0.0], [1.0]], [0.625, 0.375], [0.0, 1.0])
  np.testing.assert_allclose(relative_masses(swarm), [1.0, 0.6])

  swarm = make_swarm([[0.0], [1.0]], [1.0, 0.0], [0.0, 1.0], active=[True, False])
  np.testing.assert_array_equal(relative_masses(swarm), [1.0, 0.0])


######################################################################
# conservation over random sequences

def test_mass_conservation_random():

  rng = RandomSource(11)
  for trial in range(10000):
    n = int(rng.uniform(1, 9))
    positions = rng.uniform(0.0, 0.01, (n, 2))
    masses = rng.uniform(0.0, 1.0, n)**4 + 1e-9
    masses /= masses.sum()
    f = rng.normal(n)
    swarm = make_swarm(positions, masses, f)
    total = swarm.total_mass()

    eta = transfer_fractions(swarm.f_values, 1.0 + 7.0*rng.uniform(), EPS)
    swarm = apply_transfer(swarm, eta)
    swarm = eliminate_light(swarm, 1e-2, n)
    swarm = merge_close(swarm, 3e-3)

    assert abs(swarm.total_mass() - total) <= 1e-12, trial
    assert swarm.n_active >= 1
    assert np.all(swarm.masses[~swarm.active] == 0.0)


def test_pruning_keeps_minimum():

  rng = RandomSource(12)
  for trial in range(2000):
    n = int(rng.uniform(2, 9))
    masses = rng.uniform(0.0, 1.0, n)**4 + 1e-9
    swarm = make_swarm(rng.uniform(0.0, 0.01, (n, 2)), masses / masses.sum(), rng.normal(n))
    f_min = swarm.f_min()

    swarm = eliminate_light(swarm, 1e-1, n)
    assert swarm.f_min() == f_min, trial
    swarm = merge_close(swarm, 3e-3)
    assert swarm.f_min() == f_min, trial


if __name__ == '__main__':
  pytest.main([__file__])
