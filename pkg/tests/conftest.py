import sys
from pathlib import Path

import pytest

from lexsem import load_lexicon

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture(scope="session")
def montague():
    return load_lexicon(fixture_text("montague.mgl"))


@pytest.fixture(scope="session")
def liverpool():
    return load_lexicon(fixture_text("liverpool.mgl"))


@pytest.fixture(scope="session")
def assinatura():
    return load_lexicon(fixture_text("assinatura.mgl"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for line in results:
        terminalreporter.write_line(line)
