import functools

import pytest
from hypothesis import HealthCheck, settings

from moufang_lab.graded_lie import induce_triality
from moufang_lab.groups import cyclic, elementary_abelian, heisenberg, modular_group
from moufang_lab.malcev import extract_h
from moufang_lab.triality import abelian_doubling, group_doubling

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# (name, constructor, p); the doubles of order 15625 are built once per session
FLEET_SPECS = [
    ("ab-C5", lambda: abelian_doubling(cyclic(5)), 5),
    ("ab-C5xC5", lambda: abelian_doubling(elementary_abelian(5, 2)), 5),
    ("ab-C7", lambda: abelian_doubling(cyclic(7)), 7),
    ("double-heis125", lambda: group_doubling(heisenberg(5)), 5),
    ("double-mod125", lambda: group_doubling(modular_group(5)), 5),
]
FLEET_NAMES = [s[0] for s in FLEET_SPECS]


@functools.lru_cache(maxsize=None)
def fleet_triality(name):
    for n, make, p in FLEET_SPECS:
        if n == name:
            return make(), p
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def fleet_lie(name):
    T, p = fleet_triality(name)
    LT = induce_triality(T, p)
    return LT, extract_h(LT)


@pytest.fixture(params=FLEET_NAMES)
def fleet_member(request):
    T, p = fleet_triality(request.param)
    return request.param, T, p


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {text}")
