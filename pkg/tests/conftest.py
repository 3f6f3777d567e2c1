import pytest
from hypothesis import strategies as st

from zipshift.spec import bernoulli_spec, two_to_one_baker_spec, uneven_three_symbol_spec, validate_spec


@pytest.fixture
def e1():
    return two_to_one_baker_spec()


@pytest.fixture
def e2():
    return uneven_three_symbol_spec()


@pytest.fixture
def bijective():
    return bernoulli_spec(["1/6", "1/3", "1/2"])


@st.composite
def specs(draw, max_l=6, max_m=None):
    l = draw(st.integers(1, max_l))  # noqa: E741
    m = draw(st.integers(1, min(l, max_m or l)))
    rest = draw(st.lists(st.integers(0, m - 1), min_size=l - m, max_size=l - m))
    targets = draw(st.permutations(list(range(m)) + rest))
    weights = draw(st.lists(st.integers(1, 30), min_size=l, max_size=l))
    total = sum(weights)
    return validate_spec(
        {
            "s_plus": [f"s{k}" for k in range(l)],
            "s_minus": [f"t{k}" for k in range(m)],
            "phi": {f"s{k}": f"t{t}" for k, t in enumerate(targets)},
            "p_plus": [f"{w}/{total}" for w in weights],
        }
    )


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion and print it."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        request.config._acceptance_lines.append(line)
        print(line)
        return ok

    return record
