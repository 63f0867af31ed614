import pytest

from soficinv.corpus import generate_corpus
from soficinv.presentation import ShiftHandle

GOLDEN_MEAN = "1 a 1\n1 b 2\n2 a 1\n"
EVEN_SHIFT = "A 1 A\nA 0 B\nB 0 A\n"
FULL_AB = "1 a 1\n1 b 1\n"
FULL_A = "1 a 1\n"

CORPUS_SEED = 2024
CORPUS_SIZE = 200

# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, passed: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[1:])):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def golden():
    return ShiftHandle.from_text(GOLDEN_MEAN, "golden")


@pytest.fixture
def even():
    return ShiftHandle.from_text(EVEN_SHIFT, "even")


@pytest.fixture
def full_ab():
    return ShiftHandle.from_text(FULL_AB, "full_ab")


@pytest.fixture
def full_a():
    return ShiftHandle.from_text(FULL_A, "full_a")


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(CORPUS_SEED, CORPUS_SIZE)
