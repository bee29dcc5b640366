from pathlib import Path

import numpy as np
import pytest

from unicornsim.universe import FactorUniverse, Group, GroupKind, read_universe

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "unicornsim" / "data"


@pytest.fixture(scope="session")
def fixture_universe() -> FactorUniverse:
    """The shipped 11-group synthetic correlation matrix."""
    return read_universe(DATA_DIR / "fixture_sigma.csv", DATA_DIR / "fixture_sigma_kinds.json")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


def tiny_universe(sigma_12: float = 0.0) -> FactorUniverse:
    """Two sectors, one geography, one founder type; identity-ish matrix."""
    sigma = np.eye(4)
    sigma[0, 1] = sigma[1, 0] = sigma_12
    return FactorUniverse(
        groups=(
            Group("S1", GroupKind.SECTOR),
            Group("S2", GroupKind.SECTOR),
            Group("G1", GroupKind.GEOGRAPHY),
            Group("F1", GroupKind.FOUNDER_TYPE),
        ),
        sigma=sigma,
    )


def single_sector_universe() -> FactorUniverse:
    """One group per kind, identity correlations; the minimal valid universe."""
    return FactorUniverse(
        groups=(
            Group("S1", GroupKind.SECTOR),
            Group("G1", GroupKind.GEOGRAPHY),
            Group("F1", GroupKind.FOUNDER_TYPE),
        ),
        sigma=np.eye(3),
    )
