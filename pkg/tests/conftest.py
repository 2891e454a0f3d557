"""Pytest configuration and shared fixtures."""

import pytest

from lowdisc_maps.interval_maps import PLMap
from lowdisc_maps.mapfile import load_map


@pytest.fixture(scope="session")
def doubling() -> PLMap:
    return load_map("doubling")


@pytest.fixture(scope="session")
def tent() -> PLMap:
    return load_map("tent")


@pytest.fixture(scope="session")
def golden_mean() -> PLMap:
    return load_map("golden-mean")


@pytest.fixture(scope="session")
def beta_19() -> PLMap:
    return load_map("beta-1.9")


@pytest.fixture(scope="session")
def three_shift() -> PLMap:
    return load_map("three-shift")


@pytest.fixture(scope="session")
def two_block() -> PLMap:
    return load_map("two-block")
