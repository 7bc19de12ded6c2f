"""
JSON dump of a built chain, for debugging and oracle cross-checks.
"""

import json
from typing import Dict

from core_utils import PathLike, atomic_write_text

from .model import Chain


def chain_to_dict(chain: Chain) -> Dict:
    return {
        "variables": list(chain.variables),
        "initial": chain.initial,
        "states": [chain.valuation(i) for i in range(chain.n_states)],
        "rows": [[[target, prob] for target, prob in row] for row in chain.rows],
        "absorbing": sorted(chain.absorbing),
        "stats": {"states": chain.n_states, "transitions": chain.n_transitions},
    }


def dump_chain(chain: Chain, path: PathLike) -> None:
    atomic_write_text(path, json.dumps(chain_to_dict(chain), indent=2) + "\n")
