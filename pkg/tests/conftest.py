import pytest

from oracles import make_table

_ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def t0():
    # a=[0,0,1,1], b=[0,1,0,1], d=[0,0,1,1]
    return make_table([[0, 0, 1, 1], [0, 1, 0, 1]], [0, 0, 1, 1])


@pytest.fixture
def t1():
    # same conditions, d=[0,1,1,1]: neither attribute alone is enough
    return make_table([[0, 0, 1, 1], [0, 1, 0, 1]], [0, 1, 1, 1])


@pytest.fixture
def criterion(request, capsys):
    """Record a PASS/FAIL line for an acceptance criterion and print it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, {})

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        with capsys.disabled():
            print(f"\n{line}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
