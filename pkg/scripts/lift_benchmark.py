"""Reedy lifting solver against exhaustive enumeration on random squares:
agreement of solvability and time spent by each."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import product as iproduct

from _common import emit, parse_config

from finreedy import builtin
from finreedy.gen import GenConfig, random_diagram, random_map
from finreedy.setfun import DiagramError, SetNatTrans, compose
from finreedy.wfs import all_lifts_bruteforce, reedy_lift


@dataclass
class Config:
    """Lifting-solver benchmark."""

    structures: list = field(default_factory=lambda: ["parpair", "span-alt", "omega:2", "parpair-op"])
    trials: int = 50
    seed: int = 0
    enumeration_cap: int = 100_000


def natural_maps(x, y, cap):
    nodes = list(x.base.objects)
    slots = [(n, e) for n in nodes for e in x.carrier[n]]
    pools = [list(y.carrier[n]) for n, _ in slots]
    total = 1
    for p in pools:
        total *= len(p)
    if total > cap:
        return []
    out = []
    for combo in iproduct(*pools):
        comps = {n: {} for n in nodes}
        for (n, e), v in zip(slots, combo):
            comps[n][e] = v
        h = SetNatTrans(x, y, comps)
        if h.validate():
            out.append(h)
    return out


def run(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    gen = GenConfig(2, 2)
    results = {}
    for spec in cfg.structures:
        r = builtin(spec)
        stats = Counter()
        t_solver = t_brute = 0.0
        for _ in range(cfg.trials):
            i = random_map(r.base, rng, gen)
            p = random_map(r.base, rng, gen)
            vs = natural_maps(i.target, p.target, cfg.enumeration_cap)
            if not vs:
                stats["skipped"] += 1
                continue
            v = rng.choice(vs)
            us = [u for u in natural_maps(i.source, p.source, cfg.enumeration_cap) if compose(p, u) == compose(v, i)]
            if not us:
                stats["skipped"] += 1
                continue
            u = rng.choice(us)
            t0 = time.perf_counter()
            res = reedy_lift(r, i, p, u, v)
            t1 = time.perf_counter()
            try:
                count = all_lifts_bruteforce(i, p, u, v, cfg.enumeration_cap)
            except DiagramError:
                stats["too large"] += 1
                continue
            t2 = time.perf_counter()
            t_solver += t1 - t0
            t_brute += t2 - t1
            stats[res.status] += 1
            stats["agree"] += (res.status == "LIFT") == (count > 0)
        results[spec] = {**dict(sorted(stats.items())), "solver_seconds": round(t_solver, 4),
                         "enumeration_seconds": round(t_brute, 4)}
    return results


def main(argv=None):
    cfg, out = parse_config(Config, argv)
    emit({"config": asdict(cfg), "results": run(cfg)}, out)


if __name__ == "__main__":
    main()
