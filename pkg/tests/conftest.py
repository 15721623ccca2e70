import pytest

from posets.config import LabConfig
from posets.render import dump_json
from posets.serializers import poset_to_dict


@pytest.fixture
def config():
    return LabConfig()


@pytest.fixture
def write_poset(tmp_path):
    """Write a Poset as a JSON poset file and return its path as a string."""

    def write(P, name="poset.json"):
        path = tmp_path / name
        path.write_text(dump_json(poset_to_dict(P)))
        return str(path)

    return write
