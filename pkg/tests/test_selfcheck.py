"""Test the self checks."""

import pytest

from pysbrd import selfcheck


def test_run_all():

  results = selfcheck.run_all(seed=0)
  assert [ r.name for r in results ] == [ name for name, _ in selfcheck.CHECKS ]
  for r in results:
    assert r.passed, (r.name, r.detail)


def test_check_exception_is_failure(monkeypatch):

  def broken(seed):
    raise FloatingPointError('overflow')

  monkeypatch.setattr(selfcheck, 'CHECKS', [ ('broken', broken) ])
  (result,) = selfcheck.run_all()
  assert not result.passed
  assert 'FloatingPointError' in result.detail


if __name__ == '__main__':
  pytest.main([__file__])
