import os

import pytest

from hgspq.arith import pq_parameters
from hgspq.cyclic import (
    cyclic_hgs_counts,
    cyclic_iso_classes,
    enumerate_transitive_cyclic,
)
from hgspq.holomorph import build_cyclic_holomorph, build_metab_holomorph
from hgspq.metab import enumerate_table1, metab_hgs_counts, metab_iso_classes
from hgspq.oracle import all_subgroups, transitive_classes


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HGSPQ_DEEP"):
        return
    skip = pytest.mark.skip(reason="extended tier: set HGSPQ_DEEP=1")
    for item in items:
        if "deep" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def params73():
    return pq_parameters(7, 3)


@pytest.fixture(scope="session")
def params133():
    return pq_parameters(13, 3)


@pytest.fixture(scope="session")
def params115():
    return pq_parameters(11, 5)


@pytest.fixture(scope="session")
def cyc73(params73):
    return build_cyclic_holomorph(params73)


@pytest.fixture(scope="session")
def met73(params73):
    return build_metab_holomorph(params73)


@pytest.fixture(scope="session")
def cyc_descs73(params73, cyc73):
    _, model = cyc73
    return enumerate_transitive_cyclic(params73, model)


@pytest.fixture(scope="session")
def cyc_classes73(params73, cyc_descs73):
    return cyclic_hgs_counts(cyclic_iso_classes(cyc_descs73, params73), params73)


@pytest.fixture(scope="session")
def met_table73(params73, met73):
    _, model = met73
    return enumerate_table1(params73, model)


@pytest.fixture(scope="session")
def met_classes73(params73, met_table73):
    return metab_hgs_counts(metab_iso_classes(met_table73, params73), params73)


@pytest.fixture(scope="session")
def lattice_cyc73(cyc73):
    group, _ = cyc73
    return all_subgroups(group)


@pytest.fixture(scope="session")
def lattice_met73(met73):
    group, _ = met73
    return all_subgroups(group)


@pytest.fixture(scope="session")
def oracle_cyc73(lattice_cyc73):
    return transitive_classes(lattice_cyc73)


@pytest.fixture(scope="session")
def oracle_met73(lattice_met73):
    return transitive_classes(lattice_met73)


@pytest.fixture(scope="session")
def report73():
    from hgspq.report import build_report

    return build_report(7, 3)
