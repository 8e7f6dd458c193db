import pytest

from Proof_Checker.pipeline.corpus import PEANO_SIGNATURE

from .helpers import EXAMPLE_ONE, load


@pytest.fixture
def example_one() -> str:
    return EXAMPLE_ONE


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.dk"
    path.write_text(EXAMPLE_ONE, encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def peano():
    """Runner whose context holds the Peano signature."""
    return load(PEANO_SIGNATURE)


@pytest.fixture(scope="module")
def logic():
    """Runner whose context holds the implication theory."""
    return load(EXAMPLE_ONE)
