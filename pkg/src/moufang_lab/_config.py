"""Runtime caps, read from the environment at call time so tests can override them."""

import os

ENV_PREFIX = "MOUFANG_LAB_"

_DEFAULTS = {
    "MAX_TABLE_ORDER": 4096,  # largest group stored as an explicit Cayley table
    "MAX_OMEGA_ORDER": 1024,  # largest group whose algebra F_pG is built densely
    "MAX_DEGREE": 6,  # free Malcev truncation degree
    "PERM_BUDGET": 120,  # max |S_k| summed over in symmetrized identities
    "SWEEP_LIMIT": 10_000_000,  # exhaustive triple sweeps up to this many triples
    "SAMPLE_SIZE": 10_000,  # triples drawn when a sweep is sampled instead
}

# Hard ceiling on permutation sums, whatever the environment says.
PERM_BUDGET_CEILING = 5040


def cap(name: str) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return _DEFAULTS[name]
    return int(raw)


def perm_budget() -> int:
    return min(cap("PERM_BUDGET"), PERM_BUDGET_CEILING)


def use_numba() -> bool:
    return os.environ.get(ENV_PREFIX + "NUMBA", "1").lower() not in ("0", "false", "no", "off")
