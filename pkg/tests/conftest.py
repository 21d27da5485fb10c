import os
import sys
from pathlib import Path

import pytest

from reflectance_curves.colorimetry import default_system

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (status, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def system():
    return default_system()


@pytest.fixture(scope="session")
def munsell_csv():
    """Path to the externally supplied Munsell 2007 glossy dataset, if present."""
    env = os.environ.get("MUNSELL_CSV")
    candidates = [Path(env)] if env else []
    candidates.append(Path(__file__).parent / "data" / "munsell_2007_glossy.csv")
    for p in candidates:
        if p.is_file():
            return p
    return None


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {detail}")
