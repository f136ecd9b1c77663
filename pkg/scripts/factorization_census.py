"""Census of factorization categories: for each morphism, how many
two-step factorizations it has, at which degrees, and how long the
zig-zags back to the canonical factorization are."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import asdict, dataclass, field

from _common import emit, parse_config

from finreedy import builtin
from finreedy.reedy import factorization_category, reedy_factorize


@dataclass
class Config:
    """Factorization-category census over builtin structures."""

    structures: list = field(default_factory=lambda: ["delta:2", "delta:3", "omega:5", "prod(omega:1,omega:1)"])


def census(spec: str) -> dict:
    r = builtin(spec)
    c = r.base
    sizes, longest = Counter(), Counter()
    disconnected = 0
    for f in c.morphisms:
        fc = factorization_category(r, f)
        fac = reedy_factorize(r, f)
        goal = fc.objects.index((fac.left, fac.right))
        sizes[len(fc.objects)] += 1
        disconnected += not fc.is_connected()
        worst = 0
        for i, d in enumerate(fc.degrees):
            path = fc.zigzag(i, goal, fac.degree, d)
            worst = max(worst, len(path) - 1)
        longest[worst] += 1
    return {
        "morphisms": len(c.morphisms),
        "fact_cat_sizes": dict(sorted(sizes.items())),
        "longest_zigzag": dict(sorted(longest.items())),
        "disconnected": disconnected,
    }


def main(argv=None):
    cfg, out = parse_config(Config, argv)
    t0 = time.time()
    result = {"config": asdict(cfg), "structures": {s: census(s) for s in cfg.structures}}
    result["seconds"] = round(time.time() - t0, 2)
    emit(result, out)


if __name__ == "__main__":
    main()
