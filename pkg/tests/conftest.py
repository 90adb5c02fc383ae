import pytest

from helpers import example_instance
from ordersched.relaxation import glue


@pytest.fixture
def inst():
    return example_instance()


@pytest.fixture
def glued(inst):
    return glue(inst)
