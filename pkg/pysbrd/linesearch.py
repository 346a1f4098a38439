"""PySBRD mass weighted backtracking line search."""

from dataclasses import dataclass


@dataclass
class LineSearchResult:
  """Outcome of :func:`backtrack`.

  :param h:        accepted step size (the last trial if not accepted)
  :param shrinks:  number of gamma contractions
  :param f_new:    objective at ``x - h p``
  :param evals:    objective evaluations used (``shrinks + 1``)
  :param accepted: ``False`` if *max_shrinks* contractions did not suffice
  """

  h:        float
  shrinks:  int
  f_new:    float
  evals:    int
  accepted: bool


def descent_bound(f_x, lambda_m, h, grad_sq, half=True):
  """Right hand side of the descent condition at step *h*."""
  c = 0.5*lambda_m if half else lambda_m
  return f_x - c * h * grad_sq


def backtrack(problem, x, p, grad_sq, lambda_m, gamma, h0, max_shrinks, f_x, half=True):
  r"""Find the largest step ``h = h0 gamma^s`` with

  .. math::

    F(x - h p) \le F(x) - \tfrac{1}{2} \lambda \tilde m \, h \, |\nabla F(x)|^2.

  :param problem:     objective (anything with ``evaluate``)
  :param x:           agent position
  :param p:           descent direction
  :param grad_sq:     squared gradient norm at *x*
  :param lambda_m:    lambda times the agent's relative mass
  :param gamma:       shrinkage factor in (0, 1)
  :param h0:          initial step
  :param max_shrinks: maximum number of contractions
  :param f_x:         F(x), already known to the caller
  :param half:        use the halved guard (default); ``False`` drops the 1/2

  Steps are computed as ``h0 * gamma**s`` so that an accepted step is
  exactly ``h0 gamma^shrinks``.  Only trial points are evaluated.
  """

  for s in range(max_shrinks + 1):
    h = h0 * gamma**s
    f_new = problem.evaluate(x - h*p)
    if f_new <= descent_bound(f_x, lambda_m, h, grad_sq, half):
      return LineSearchResult(h, s, float(f_new), s + 1, True)

  return LineSearchResult(h, max_shrinks, float(f_new), max_shrinks + 1, False)
