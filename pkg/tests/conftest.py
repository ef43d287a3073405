import random
from pathlib import Path

import pytest

from cyclemine.temporal_db import TemporalDatabase, Transaction, load_transactions

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_PATH = DATA_DIR / "system_failures.fimi"

# item ids in the system-failures fixture
TICKET, SHORTAGE, NEWSPRINT, HARDDRIVE = 0, 1, 2, 3


@pytest.fixture(scope="session")
def fixture_path() -> Path:
    return FIXTURE_PATH


@pytest.fixture(scope="session")
def failures_db() -> TemporalDatabase:
    return load_transactions(FIXTURE_PATH)


def random_database(rng: random.Random, max_units: int = 12, max_items: int = 6,
                    max_txns_per_unit: int = 3) -> TemporalDatabase | None:
    """Small random database; None when no transaction was drawn."""
    units = rng.randint(4, max_units)
    items = rng.randint(2, max_items)
    txns = []
    tid = 0
    for unit in range(units):
        for _ in range(rng.randint(0, max_txns_per_unit)):
            size = rng.randint(1, items)
            chosen = rng.sample(range(items), size)
            txns.append(Transaction(tid, unit, {i: 1 for i in chosen}))
            tid += 1
    if not txns:
        return None
    return TemporalDatabase(txns, units)
