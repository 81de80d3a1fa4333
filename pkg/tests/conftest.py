from functools import lru_cache

from conglat.families import build as _build


@lru_cache(maxsize=None)
def built(family, n, q=None):
    """Family monoids are immutable, so tests share one instance per degree."""
    return _build(family, n, q)


# semigroups small enough (|S| <= 60) for exhaustive structural checks
SMALL = [("tn", n, None) for n in range(4)] + [("ptn", n, None) for n in range(3)] \
    + [("in", n, None) for n in range(4)] + [("on", n, None) for n in range(5)] \
    + [("pn", n, None) for n in range(3)] + [("bn", n, None) for n in range(4)] \
    + [("tln", n, None) for n in range(6)] + [("pbn", n, None) for n in range(3)] \
    + [("instar", n, None) for n in range(4)] + [("fnstar", n, None) for n in range(4)] \
    + [("mnq", 1, 2), ("mnq", 1, 3), ("mnq", 1, 4), ("mnq", 2, 2)]


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
