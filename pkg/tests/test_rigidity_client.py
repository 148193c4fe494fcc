import pytest

from src.clients.rigidity_client import CylindersConfig, PlanesConfig, RigidityClient, SpheresConfig
from src.utils.surface_utils import SurfaceKind


def test_surface_configs():
    assert RigidityClient("planes").surface.kind == SurfaceKind.PLANES
    assert isinstance(RigidityClient("Spheres").config, SpheresConfig)
    client = RigidityClient("cylinders", ["1", "2"])
    assert isinstance(client.config, CylindersConfig)
    assert client.surface.sheet_count == 2
    assert client.config.freedom == 2
    assert PlanesConfig().freedom == 3


def test_unsupported_surface():
    with pytest.raises(ValueError):
        RigidityClient("tori")


def test_assignments(k4):
    client = RigidityClient("cylinders", ["1", "2", "3"], seed=4)
    assert client.assignment_for(k4, [0, 2, 1, 0]).sheets == (0, 2, 1, 0)
    random = client.assignment_for(k4)
    assert len(random.sheets) == 4 and all(0 <= s < 3 for s in random.sheets)
    assert random == client.assignment_for(k4)


def test_combinatorial_verdicts(k4, k4_minus_edge):
    cylinders = RigidityClient("cylinders")
    planes = RigidityClient("planes")
    assert cylinders.combinatorial_verdict(k4) and not cylinders.combinatorial_verdict(k4_minus_edge)
    assert planes.combinatorial_verdict(k4_minus_edge) and not planes.combinatorial_verdict(k4)


def test_analyze_graph_matches_verdict(k4, k4_minus_edge):
    client = RigidityClient("cylinders", ["1", "2"], trials=2, seed=1)
    assert client.analyze_graph(k4).isostatic
    assert not client.analyze_graph(k4_minus_edge).isostatic
    report = client.analyze_graph(k4, assignment=[0, 1, 1, 0])
    assert (report.rank, report.nullity) == (10, 2)


def test_sample(k4):
    client = RigidityClient("spheres", seed=2)
    F = client.sample(k4)
    assert F.is_exact
    assert F == client.sample(k4)
    assert client.analyze_framework(F).infinitesimally_rigid


def test_report_keeps_the_deciding_sample(k4_minus_edge):
    client = RigidityClient("cylinders", trials=3, seed=5)
    report = client.analyze_graph(k4_minus_edge)
    assert report.framework.graph == k4_minus_edge
    assert client.analyze_framework(report.framework).rank == report.rank
