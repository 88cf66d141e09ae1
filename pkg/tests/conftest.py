import pytest

from ltorsion.classgroup import batch


@pytest.fixture(autouse=True, scope="session")
def _fresh_family_cache():
    batch.clear_cache()
    yield
