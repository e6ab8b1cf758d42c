import pytest

from moditer import forms


@pytest.fixture(scope="session")
def delta2100():
    return forms.builtin("delta", 2100)


@pytest.fixture(scope="session")
def delta6000():
    return forms.builtin("delta", 6000)


@pytest.fixture(scope="session")
def e4_200():
    return forms.builtin("E4", 200)


@pytest.fixture(scope="session")
def e4_2000():
    return forms.builtin("E4", 2000)
