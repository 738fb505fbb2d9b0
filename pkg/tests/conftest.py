import pytest

from gfermat import full_linear_group, new_curve

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def c33():
    """(3,3) with lambda = 4 over GF(13); 4^2 - 4 + 1 = 13."""
    return new_curve(3, 3, [4], {"kind": "prime", "p": 13})


@pytest.fixture(scope="session")
def c33_rooted(c33):
    return c33.with_fixed_point_roots()


@pytest.fixture(scope="session")
def c24():
    return new_curve(2, 4, [2, 5], {"kind": "prime", "p": 11})


@pytest.fixture(scope="session")
def aut33(c33):
    return full_linear_group(c33)


@pytest.fixture(scope="session")
def c33_char2():
    """(3,3) over GF(4) with lambda a primitive cube root of unity (k - 1 = 2)."""
    from gfermat.fields import finite_field

    F = finite_field(2, 2)
    return new_curve(3, 3, [F.gen], F)
