import json

import pytest

from quadrep.forms import scaled_identity


@pytest.fixture
def i4():
    return scaled_identity(4)


@pytest.fixture
def form_file(tmp_path):
    def write(form, name="form.json"):
        path = tmp_path / name
        path.write_text(json.dumps(form.to_json()))
        return str(path)

    return write


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[cid])
