import pytest

from lambdamu.harness import EnumBounds, fragment
from lambdamu.typecheck import is_typable


@pytest.fixture(scope="session")
def bounds5():
    return EnumBounds(max_cxty=5)


@pytest.fixture(scope="session")
def bounds8():
    return EnumBounds(max_cxty=8)


@pytest.fixture(scope="session")
def bounds9():
    return EnumBounds(max_cxty=9)


@pytest.fixture(scope="session")
def typable5(bounds5):
    return [t for t in fragment(bounds5) if is_typable(t)]


@pytest.fixture(scope="session")
def typable8(bounds8):
    return [t for t in fragment(bounds8) if is_typable(t)]


@pytest.fixture(scope="session")
def typable9(bounds9):
    return [t for t in fragment(bounds9) if is_typable(t)]
