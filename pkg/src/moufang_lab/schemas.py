"""JSON interchange for groups, trialities and loops.

Group file:     {"order": n, "table": [[...]], "p_hint": p (optional)}
Triality file:  group file plus {"rho": [perm], "sigma": [perm]}
Loop file:      {"order": n, "table": [[...]]} (no associativity requirement)

Indices are 0-based and 0 is the identity.  Groups too large to tabulate are
given as construction descriptors instead:

    {"construction": "group_doubling" | "abelian_doubling", "base": <group file>, "p_hint": p}
    {"construction": "example_4", "p": p, "sigma_sign": 1 | -1}

Canonical form: keys sorted, no whitespace, trailing newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .groups import FiniteGroup, GroupTooLarge, InvalidGroup
from .moufang import InvalidLoop, Loop
from .triality import TrialityGroup, abelian_doubling, group_doubling

CONSTRUCTIONS = ("group_doubling", "abelian_doubling", "example_4")


class SchemaError(ValueError):
    """Malformed or unreadable input file."""


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror or exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return obj


def _int_list(obj, field, length=None) -> np.ndarray:
    v = obj.get(field)
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SchemaError(f"'{field}' must be a list of integers")
    if length is not None and len(v) != length:
        raise SchemaError(f"'{field}' has length {len(v)}, expected {length}")
    return np.asarray(v, dtype=np.int64)


def _table(obj) -> np.ndarray:
    n = obj.get("order")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("'order' must be a positive integer")
    rows = obj.get("table")
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError(f"'table' must be a list of {n} rows")
    table = np.stack([_int_list({"row": r}, "row", n) for r in rows]) if n else np.zeros((0, 0), dtype=np.int64)
    if table.size and (table.min() < 0 or table.max() >= n):
        raise SchemaError("table entries out of range")
    return table


def _p_hint(obj):
    p = obj.get("p_hint")
    if p is not None and (not isinstance(p, int) or isinstance(p, bool) or p < 2):
        raise SchemaError("'p_hint' must be an integer >= 2")
    return p


def read_group(obj, name: str = "") -> FiniteGroup:
    try:
        return FiniteGroup(_table(obj), name=name or obj.get("name", ""))
    except (InvalidGroup, GroupTooLarge) as exc:
        raise SchemaError(f"not a usable group table: {exc}") from None


def group_to_dict(G: FiniteGroup, p_hint=None) -> dict:
    out = {"order": G.order, "table": G.table.tolist()}
    if p_hint is not None:
        out["p_hint"] = p_hint
    return out


def read_loop(obj) -> Loop:
    try:
        return Loop(_table(obj), name=obj.get("name", ""))
    except InvalidLoop as exc:
        raise SchemaError(f"not a loop table: {exc}") from None


def loop_to_dict(L: Loop) -> dict:
    return {"order": L.order, "table": L.table.tolist()}


@dataclass
class TrialityInput:
    """A parsed triality file: either a triality group or the hand-built example."""

    source: dict  # normalized file contents, for canonical re-emission
    triality: TrialityGroup | None = None
    p_hint: int | None = None
    example: tuple[int, int] | None = None  # (p, sigma_sign)
    name: str = ""


def read_triality(obj, name: str = "") -> TrialityInput:
    if "construction" in obj:
        return _read_descriptor(obj, name)
    G = read_group(obj, name=name)
    rho = _int_list(obj, "rho", G.order)
    sigma = _int_list(obj, "sigma", G.order)
    if (rho.min(initial=0) < 0 or rho.max(initial=0) >= G.order) or (sigma.min(initial=0) < 0 or sigma.max(initial=0) >= G.order):
        raise SchemaError("rho/sigma entries out of range")
    T = TrialityGroup.from_permutations(G, rho, sigma, name=name or G.name)
    p = _p_hint(obj)
    source = triality_to_dict(T, p)
    return TrialityInput(source, triality=T, p_hint=p, name=T.name)


def _read_descriptor(obj, name):
    kind = obj["construction"]
    if kind not in CONSTRUCTIONS:
        raise SchemaError(f"unknown construction {kind!r}; expected one of {CONSTRUCTIONS}")
    if kind == "example_4":
        p, sign = obj.get("p"), obj.get("sigma_sign", 1)
        if not isinstance(p, int) or p <= 3 or sign not in (1, -1):
            raise SchemaError("example_4 needs integer p > 3 and sigma_sign in {1, -1}")
        src = {"construction": kind, "p": p, "sigma_sign": sign}
        return TrialityInput(src, p_hint=p, example=(p, sign), name=name or f"example-4({sign:+d})")
    base_obj = obj.get("base")
    if not isinstance(base_obj, dict):
        raise SchemaError(f"{kind} needs a 'base' group object")
    base = read_group(base_obj, name=base_obj.get("name", ""))
    try:
        T = abelian_doubling(base) if kind == "abelian_doubling" else group_doubling(base)
    except ValueError as exc:
        raise SchemaError(f"{kind}: {exc}") from None
    p = _p_hint(obj)
    src = {"construction": kind, "base": group_to_dict(base)}
    if p is not None:
        src["p_hint"] = p
    return TrialityInput(src, triality=T, p_hint=p, name=name or T.name)


def triality_to_dict(T: TrialityGroup, p_hint=None) -> dict:
    out = group_to_dict(T.G, p_hint)
    out["rho"] = T.rho.images.tolist()
    out["sigma"] = T.sigma.images.tolist()
    return out


def load_triality(path) -> TrialityInput:
    return read_triality(load_json(path), name=Path(path).stem)


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj))
