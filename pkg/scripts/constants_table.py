"""Cofibrant/fibrant constants flags for builtin structures and for
random poset structures, with the duality swap checked on each."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from _common import emit, parse_config

from finreedy import builtin
from finreedy.gen import random_poset_reedy
from finreedy.library import ACCEPTANCE_BUILTINS
from finreedy.reedy import dual_reedy
from finreedy.wfs import constants_classification


@dataclass
class Config:
    """Constants classification table."""

    structures: list = field(default_factory=lambda: list(ACCEPTANCE_BUILTINS) + ["omega:3"])
    random_posets: int = 20
    poset_size: int = 5
    seed: int = 0


def row(r) -> dict:
    rep = constants_classification(r)
    dual = constants_classification(dual_reedy(r))
    return {
        "cofibrant_constants": rep.cofibrant,
        "fibrant_constants": rep.fibrant,
        "consistent": rep.consistent,
        "duality_swap": (dual.cofibrant, dual.fibrant) == (rep.fibrant, rep.cofibrant),
    }


def main(argv=None):
    cfg, out = parse_config(Config, argv)
    rng = random.Random(cfg.seed)
    table = {s: row(builtin(s)) for s in cfg.structures}
    posets = [row(random_poset_reedy(rng, cfg.poset_size)) for _ in range(cfg.random_posets)]
    summary = {
        "posets": len(posets),
        "cofibrant": sum(p["cofibrant_constants"] for p in posets),
        "fibrant": sum(p["fibrant_constants"] for p in posets),
        "all_consistent": all(p["consistent"] and p["duality_swap"] for p in posets),
    }
    emit({"config": asdict(cfg), "builtins": table, "random_posets": summary}, out)


if __name__ == "__main__":
    main()
