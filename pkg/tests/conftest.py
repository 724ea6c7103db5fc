"""Shared fixtures: the bundled configuration and the expensive sweeps
are computed once per session."""

import pytest

from rigidsurf.arrangement import build_heart, singular_points
from rigidsurf.certify import build_sweep, check_condition_a, full_certificate
from rigidsurf.cover import complete_labels


@pytest.fixture(scope="session")
def heart():
    return build_heart()


@pytest.fixture(scope="session")
def table(heart):
    return singular_points(heart.arrangement)


@pytest.fixture(scope="session")
def labels(heart, table):
    return complete_labels(heart.line_labels[:-1], table, heart.p, heart.r)


@pytest.fixture(scope="session")
def sweep(labels, table):
    return build_sweep(labels, table)


@pytest.fixture(scope="session")
def cond_a(sweep):
    return check_condition_a(sweep)


@pytest.fixture(scope="session")
def certificate(heart):
    return full_certificate(heart)
