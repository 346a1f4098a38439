"""PySBRD random descent directions.

A descent orientation is drawn in the spherical cap around the
gradient orientation ``q = grad / |grad|``.  The cosine ``r`` between
the two is uniform in ``[(1 + m)/2, 1)`` where ``m`` is the agent's
relative mass, so the cap opening ranges from 60 degrees for the
lightest agents down to zero for the heaviest one.

Sampling happens around the north pole ``z = (0, ..., 0, 1)`` first
and the sample is then carried to ``q`` by the Householder reflection
that swaps ``z`` and ``q``.

Note that ``r`` is uniform in the *cosine*, not in surface measure, so
samples crowd towards the cap's axis relative to a uniform density on
the cap.

"""

from dataclasses import dataclass

import numpy as np

from pysbrd.core import Mode


@dataclass
class DirectionSample:
  """A descent direction *p* with its orientation *omega* and cosine *r*."""

  p:     np.ndarray
  r:     float
  omega: np.ndarray

  @property
  def angle(self):
    """Angle between *p* and the gradient, in degrees."""
    return float(np.degrees(np.arccos(np.clip(self.r, -1.0, 1.0))))


###############################################################################

def north_pole(d):
  z = np.zeros(d)
  z[-1] = 1.0
  return z


def sample_cap_point(d, r, rng):
  """Random unit vector whose last coordinate is exactly *r*.

  :param d:   dimension (>= 2)
  :param r:   cosine to the north pole, in ``[0, 1]``
  :param rng: :class:`~pysbrd.core.RandomSource`

  The first ``d-1`` coordinates are a uniformly random direction on
  the ``(d-2)``-sphere scaled by ``sqrt(1 - r**2)``.
  """

  if d < 2:
    raise ValueError('cap sampling needs d >= 2, got %d' % d)
  if not 0.0 <= r <= 1.0:
    raise ValueError('cap cosine must lie in [0, 1], got %r' % (r,))

  while True:
    y = rng.normal(d - 1)
    norm = np.sqrt(y @ y)
    if norm > 0.0:
      break

  x = np.empty(d)
  x[:-1] = np.sqrt(1.0 - r*r) * y / norm
  x[-1] = r
  return x


def reflect_to(q_hat, x):
  """Apply the Householder reflection exchanging the north pole and *q_hat*.

  With ``v = q_hat - z`` the reflection is ``x - 2 <v, x> v / |v|^2``.
  It preserves norms and maps ``<x, z>`` to ``<omega, q_hat>``.  When
  *q_hat* is the north pole *x* is returned unchanged.

  In the upper hemisphere the last component of *v* is computed as
  ``-|q'|^2 / (1 + q_d)``, with ``q'`` the leading components, which
  equals ``q_d - 1`` for unit *q_hat* without the cancellation near
  the pole.
  """

  q_hat = np.asarray(q_hat, np.float64)
  x = np.asarray(x, np.float64)

  head = q_hat[:-1] @ q_hat[:-1]
  tail = q_hat[-1]
  if tail > 0.0 and head == 0.0:
    return x.copy()

  v = q_hat.copy()
  v[-1] = -head / (1.0 + tail) if tail > 0.0 else tail - 1.0
  return x - 2.0 * (v @ x) / (v @ v) * v


def random_descent_direction(grad, m_rel, mode, rng):
  """Draw the descent direction of an agent.

  :param grad:  gradient at the agent (nonzero)
  :param m_rel: relative mass in ``(0, 1]``
  :param mode:  :class:`~pysbrd.core.Mode`
  :param rng:   :class:`~pysbrd.core.RandomSource`

  In SBGD mode, for the heaviest agent (``m_rel == 1``) and in one
  dimension the gradient itself is returned with ``r = 1`` and no
  random numbers are consumed.  Otherwise ``<p, grad> = r |grad|^2``
  with ``r >= (1 + m_rel)/2`` and ``|p| = |grad|``.
  """

  grad = np.asarray(grad, np.float64)
  gnorm = np.sqrt(grad @ grad)
  if not gnorm > 0.0:
    raise ValueError('descent direction needs a nonzero gradient')

  q_hat = grad / gnorm

  if Mode(mode) == Mode.SBGD or m_rel >= 1.0 or grad.size == 1:
    return DirectionSample(grad.copy(), 1.0, q_hat)

  r = float(rng.uniform(0.5*(1.0 + m_rel), 1.0))
  omega = reflect_to(q_hat, sample_cap_point(grad.size, r, rng))
  return DirectionSample(gnorm * omega, r, omega)
