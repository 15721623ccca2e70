"""Command output compared byte for byte with committed files under tests/goldens."""
from io import StringIO
from pathlib import Path

import pytest
from django.core.management import call_command

from posets.constructions import powerset_semilattice
from posets.core import antichain

pytestmark = pytest.mark.integration

GOLDENS = Path(__file__).parent / "goldens"


def run(*args):
    out = StringIO()
    call_command(*args, "--seed", "0", stdout=out, stderr=StringIO())
    return out.getvalue()


def golden(name):
    return (GOLDENS / name).read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "args,name",
    [
        (("gen", "powerset", "--k", "2"), "gen_powerset_2.json"),
        (("gen", "powerset", "--k", "2", "--format", "dot"), "gen_powerset_2.dot"),
        (("gen", "omega-star-fig", "--n", "4"), "gen_omega_star_fig_4.json"),
        (("probe", "powerset", "width", "--budget", "5"), "probe_powerset_width_5.json"),
    ],
)
def test_generated_output_matches_golden(args, name):
    first = run(*args)
    assert first == golden(name)
    assert run(*args) == first


@pytest.mark.parametrize("k", [2, 3])
def test_extract_sierp_matches_golden(write_poset, k):
    path = write_poset(powerset_semilattice(k).poset)
    assert run("extract_sierp", path) == golden(f"extract_sierp_powerset_{k}.json")


def test_ideals_match_golden(write_poset):
    path = write_poset(powerset_semilattice(2).poset)
    assert run("ideals", path, "--kind", "ideals") == golden("ideals_of_powerset_2.json")


def test_downsets_of_two_point_antichain_match_the_powerset(write_poset):
    path = write_poset(antichain(2))
    assert run("ideals", path) == golden("gen_powerset_2.json")


@pytest.mark.parametrize("workers", [1, 3])
def test_width_golden_ignores_workers(tmp_path, workers):
    config = tmp_path / "lab.json"
    config.write_text(f'{{"workers": {workers}}}')
    output = run("probe", "powerset", "width", "--budget", "5", "--config", str(config))
    assert output == golden("probe_powerset_width_5.json")
