"""High-utility itemset mining with UP-Tree / UP-Growth and the MTWU-threshold variant."""
from .dataset import (DatabaseFormatError, DatasetSpec, Transaction, TransactionDatabase,
                      generate_synthetic, load_database, parse_database, write_database)
from .miner import MinerConfig, MinerStats, Phui, build_local_tree, mine
from .oracle import brute_force_huis, brute_force_twu
from .utility import (ThresholdPolicy, compute_miu, compute_mtwu, compute_twu, exact_utility,
                      resolve_threshold, transaction_utility)
from .uptree import UpTree, build_global_tree, extract_cpb, reorganize
from .verifier import Hui, format_huis, verify

__version__ = "0.1.0"
