import random
from pathlib import Path

from huimine.dataset import TransactionDatabase, load_database

DATA = Path(__file__).parent / "data"
DB1_PATHS = (DATA / "db1.txt", DATA / "db1_utils.txt")

# DB-1 items: A=0, B=1, C=2, D=3
A, B, C, D = 0, 1, 2, 3


def db1() -> TransactionDatabase:
    return load_database(*DB1_PATHS)


def random_db(seed, max_items=12, max_transactions=60, max_qty=5, max_util=10):
    """Small random database within the oracle's reach."""
    r = random.Random(seed)
    n_items = r.randint(1, max_items)
    n_tx = r.randint(1, max_transactions)
    utils = {i: r.randint(1, max_util) for i in range(n_items)}
    rows = []
    for _ in range(n_tx):
        items = r.sample(range(n_items), r.randint(1, n_items))
        rows.append([(i, r.randint(1, max_qty)) for i in items])
    return TransactionDatabase.from_lists(rows, utils)


def fraction_threshold(total, percent):
    return -(-total * percent // 100)
