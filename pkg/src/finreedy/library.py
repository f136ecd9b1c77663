"""Builtin Reedy structures and the spec-string parser used by the CLI.

Spec strings: ``delta:N``, ``omega:N``, ``span``, ``span-alt``, ``parpair``,
``parpair-op``, ``discrete:N``, ``terminal``, ``prod(A,B)``, ``dual(A)``.
"""

from __future__ import annotations

from .fincat import (
    CategoryError,
    FinCategory,
    delta_values,
    delta_trunc,
    discrete,
    omega_trunc,
    parallel_pair,
    span,
    terminal,
)
from .reedy import ReedyStructure, dual_reedy, product_reedy


def delta_reedy(n: int) -> ReedyStructure:
    """Truncated Delta: raising = injections, lowering = surjections, deg [k] = k."""
    c = delta_trunc(n)
    raising, lowering = [], []
    for m, (s, t) in c.morphisms.items():
        vals = delta_values(m)
        k = int(t[1:-1])
        if len(set(vals)) == len(vals):
            raising.append(m)
        if set(vals) == set(range(k + 1)):
            lowering.append(m)
    return ReedyStructure(c, {f"[{i}]": i for i in range(n + 1)}, raising, lowering, name=f"delta:{n}")


def omega_reedy(n: int) -> ReedyStructure:
    c = omega_trunc(n)
    return ReedyStructure(c, {o: int(o) for o in c.objects}, c.morphisms, [c.identity[o] for o in c.objects], name=f"omega:{n}")


def span_reedy() -> ReedyStructure:
    """b <- a -> c with deg a = 0, deg b = deg c = 1, both arrows raising."""
    c = span()
    return ReedyStructure(c, {"a": 0, "b": 1, "c": 1}, c.morphisms, c.identity.values(), name="span")


def span_alt_reedy() -> ReedyStructure:
    """b <- a -> c with deg b = 0, deg a = 1, deg c = 2; a->b lowers, a->c raises."""
    c = span()
    ids = list(c.identity.values())
    return ReedyStructure(c, {"a": 1, "b": 0, "c": 2}, ids + ["a->c"], ids + ["a->b"], name="span-alt")


def parpair_reedy() -> ReedyStructure:
    c = parallel_pair()
    return ReedyStructure(c, {"a": 0, "b": 1}, c.morphisms, c.identity.values(), name="parpair")


def parpair_op_reedy() -> ReedyStructure:
    """a => b with deg a = 1, deg b = 0 and both arrows lowering."""
    c = parallel_pair()
    c.name = "parpair"
    return ReedyStructure(c, {"a": 1, "b": 0}, c.identity.values(), c.morphisms, name="parpair-op")


def discrete_reedy(n: int) -> ReedyStructure:
    c = discrete(n)
    return ReedyStructure(c, {o: 0 for o in c.objects}, c.morphisms, c.morphisms, name=f"discrete:{n}")


def terminal_reedy() -> ReedyStructure:
    c = terminal()
    return ReedyStructure(c, {"*": 0}, c.morphisms, c.morphisms, name="terminal")


_ATOMS = {
    "span": span_reedy,
    "span-alt": span_alt_reedy,
    "parpair": parpair_reedy,
    "parpair-op": parpair_op_reedy,
    "terminal": terminal_reedy,
}
_INDEXED = {"delta": delta_reedy, "omega": omega_reedy, "discrete": discrete_reedy}

ACCEPTANCE_BUILTINS = (
    "delta:3",
    "omega:5",
    "span",
    "span-alt",
    "parpair",
    "parpair-op",
    "discrete:4",
    "prod(omega:1,omega:1)",
    "dual(delta:2)",
)


def _split_args(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def builtin(spec: str) -> ReedyStructure:
    spec = spec.strip()
    if spec in _ATOMS:
        return _ATOMS[spec]()
    if spec.startswith("prod(") and spec.endswith(")"):
        args = _split_args(spec[5:-1])
        if len(args) != 2:
            raise CategoryError(f"prod takes two arguments: {spec!r}")
        r = product_reedy(builtin(args[0]), builtin(args[1]))
        r.name = f"prod({args[0]},{args[1]})"
        return r
    if spec.startswith("dual(") and spec.endswith(")"):
        r = dual_reedy(builtin(spec[5:-1]))
        r.name = spec
        return r
    if ":" in spec:
        kind, _, num = spec.partition(":")
        if kind in _INDEXED and num.isdigit():
            return _INDEXED[kind](int(num))
    raise CategoryError(f"unknown builtin {spec!r}")


def builtin_category(spec: str) -> FinCategory:
    return builtin(spec).base


def builtin_names() -> list[str]:
    return sorted(_ATOMS) + ["delta:N", "discrete:N", "dual(A)", "omega:N", "prod(A,B)"]
