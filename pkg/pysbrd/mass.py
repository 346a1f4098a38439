"""PySBRD mass transfer, elimination and merging.

Mass moves from high ground to the current minimizer.  Every routine
here conserves the total active mass and returns a new
:class:`~pysbrd.core.SwarmState`; the input swarm is left untouched.

"""

from dataclasses import dataclass

import numpy as np


@dataclass
class TransferFractions:
  """Fractions of mass each active agent hands to the minimizer.

  ``eta`` is aligned with the active agents in increasing index order.
  """

  eta: np.ndarray


###############################################################################
# mass transfer

def transfer_fractions(f_values, q, epsilon):
  r"""Compute the transfer fractions

  .. math::

    \eta_i = \left( \frac{F_i - F_{min}}{F_{max} - F_{min} + \epsilon} \right)^q

  :param f_values: objective values of the active agents
  :param q:        mass transfer exponent (>= 1)
  :param epsilon:  guard against a flat swarm

  A flat swarm (``Fmax == Fmin``) gives all zero fractions.
  """

  f = np.asarray(f_values, np.float64)
  if f.size == 0:
    raise ValueError('transfer fractions need at least one objective value')
  if not np.all(np.isfinite(f)):
    raise FloatingPointError('non-finite objective value in the swarm')

  fmin, fmax = f.min(), f.max()
  eta = ((f - fmin) / (fmax - fmin + epsilon))**q
  return TransferFractions(np.clip(eta, 0.0, 1.0))


def apply_transfer(swarm, eta):
  """Move the fraction ``eta[i]`` of every agent's mass to the minimizer.

  :param swarm: :class:`~pysbrd.core.SwarmState`
  :param eta:   :class:`TransferFractions` aligned with the active agents
  """

  swarm = swarm.copy()
  idx = swarm.active_indices()
  eta = np.asarray(getattr(eta, 'eta', eta), np.float64)

  if eta.shape != idx.shape:
    raise ValueError('expected %d transfer fractions, got %d' % (idx.size, eta.size))

  shed = swarm.masses[idx] * eta
  shed[idx == swarm.minimizer_index] = 0.0

  swarm.masses[idx] -= shed
  swarm.masses[swarm.minimizer_index] += shed.sum()
  swarm.heaviest_index = int(idx[np.argmax(swarm.masses[idx])])
  return swarm


def eliminate_light(swarm, tolm, n_initial):
  """Deactivate agents lighter than ``tolm / n_initial``.

  Their mass is handed to the minimizer, which is never eliminated.
  The comparison is strict: an agent exactly at the threshold stays.
  """

  swarm = swarm.copy()
  threshold = tolm / n_initial

  light = swarm.active & (swarm.masses < threshold)
  light[swarm.minimizer_index] = False

  if np.any(light):
    swarm.masses[swarm.minimizer_index] += swarm.masses[light].sum()
    swarm.masses[light] = 0.0
    swarm.active[light] = False
    swarm.refresh_indices()

  return swarm


def merge_close(swarm, tolmerge):
  """Merge active agents closer than *tolmerge*.

  Pairs are visited in index order; each close pair collapses onto its
  lower-F member (the lower index on ties), which keeps the summed
  mass.  Passes repeat until no pair is closer than *tolmerge*.
  """

  swarm = swarm.copy()

  while True:
    idx = swarm.active_indices()
    if idx.size < 2:
      break

    x = swarm.positions[idx]
    dist = np.sqrt(np.sum((x[:, np.newaxis, :] - x[np.newaxis, :, :])**2, axis=-1))
    close = np.triu(dist < tolmerge, k=1)
    if not np.any(close):
      break

    merged = False
    for a, b in zip(*np.nonzero(close)):
      i, j = idx[a], idx[b]
      if not (swarm.active[i] and swarm.active[j]):
        continue
      keep, drop = (i, j) if swarm.f_values[i] <= swarm.f_values[j] else (j, i)
      swarm.masses[keep] += swarm.masses[drop]
      swarm.masses[drop] = 0.0
      swarm.active[drop] = False
      merged = True

    if not merged:
      break

  return swarm.refresh_indices()


###############################################################################
# relative masses

def relative_masses(swarm):
  """Return ``m_i / max_j m_j`` for every agent (zero for inactive ones).

  The heaviest agent has relative mass exactly 1.
  """

  m = np.where(swarm.active, swarm.masses, 0.0)
  return m / m.max()
