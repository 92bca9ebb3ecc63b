import pytest
from fastapi.testclient import TestClient

from flavor_diagram import build_diagram
from forbid_engine import double_theory
from group_core import load_preset


@pytest.fixture(scope="session")
def s3():
    return load_preset("s3")


@pytest.fixture(scope="session")
def z2():
    return load_preset("z2")


@pytest.fixture(scope="session")
def z3():
    return load_preset("z3")


@pytest.fixture(scope="session")
def s3_theory(s3):
    return double_theory(s3)


@pytest.fixture(scope="session")
def s3_diagram(s3):
    return build_diagram(s3)


@pytest.fixture(scope="module")
def client():
    from main import app

    with TestClient(app) as test_client:
        yield test_client
