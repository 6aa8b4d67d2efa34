from __future__ import annotations

import pytest

from kmstab.family import e_diagram
from kmstab.finite_type import catalog_gcm
from kmstab.gcm import rank2

# criterion id -> (test name, passed, seconds) for every acceptance test that ran
ACCEPTANCE: dict[str, list[tuple[str, bool, float]]] = {}
SETUP_TIME: dict[str, float] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", str(mark.args[0])))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "setup":
        SETUP_TIME[name] = report.duration
        if report.failed:
            ACCEPTANCE.setdefault(crit, []).append((name, False, report.duration))
    elif report.when == "call":
        ACCEPTANCE.setdefault(crit, []).append((name, report.passed, report.duration + SETUP_TIME.pop(name, 0.0)))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: (int(c.rstrip("abcd")), c)):
        results = ACCEPTANCE[crit]
        ok = all(p for _, p, _ in results)
        failed = [name for name, p, _ in results if not p]
        seconds = sum(t for _, _, t in results)
        line = f"criterion {crit}: {'PASS' if ok else 'FAIL'}  [{len(results)} checks, {seconds:.1f}s]"
        if failed:
            line += "  (" + ", ".join(failed) + ")"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def e9():
    return e_diagram(9)


@pytest.fixture(scope="session")
def a4():
    return catalog_gcm("A4")


@pytest.fixture(scope="session")
def affine_a1():
    return rank2(2, 2, labels=(0, 1))
