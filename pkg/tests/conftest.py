import pytest

from zeta_eta.precision import EvalPrecision
from zeta_eta.zeros import ZeroRecord, ZeroStore, builtin_store


@pytest.fixture(scope="session")
def store():
    return builtin_store()


@pytest.fixture(scope="session")
def off_line_store():
    """A tiny table with one zero off the half-line (at 3/4 + 20i)."""
    return ZeroStore([ZeroRecord(14.13), ZeroRecord(20.0, 0.75),
                      ZeroRecord(30.0)], "test")


@pytest.fixture(scope="session")
def tight():
    return EvalPrecision(abs_err=1e-12)
