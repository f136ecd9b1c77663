"""How often random maps are relative cell complexes, and how many cells
their presentations use, per structure."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import asdict, dataclass, field

from _common import emit, parse_config

from finreedy import builtin
from finreedy.cellular import building_up, is_relative_cell, replay
from finreedy.gen import GenConfig, random_map, random_subdiagram


@dataclass
class Config:
    """Cell statistics for random maps and random subdiagram inclusions."""

    structures: list = field(default_factory=lambda: ["parpair", "span-alt", "omega:2", "dual(delta:1)"])
    trials: int = 100
    seed: int = 0
    max_generators: int = 3
    max_relations: int = 2


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    gen = GenConfig(cfg.max_generators, cfg.max_relations)
    out = {}
    for spec in cfg.structures:
        r = builtin(spec)
        stats = {"maps": Counter(), "inclusions": Counter(), "building_up_cells": Counter(), "replay_failures": 0}
        for _ in range(cfg.trials):
            f = random_map(r.base, rng, gen)
            stats["maps"]["cell" if is_relative_cell(r, f).is_cell else "not cell"] += 1
            p = building_up(r, f)
            stats["building_up_cells"][len(p.cells())] += 1
            stats["replay_failures"] += not replay(p).ok
            _, inc = random_subdiagram(f.target, rng)
            v = is_relative_cell(r, inc)
            stats["inclusions"]["cell" if v.is_cell else "not cell"] += 1
        out[spec] = {k: dict(sorted(v.items())) if isinstance(v, Counter) else v for k, v in stats.items()}
    return out


def main(argv=None):
    cfg, out = parse_config(Config, argv)
    emit({"config": asdict(cfg), "results": run(cfg)}, out)


if __name__ == "__main__":
    main()
