import pytest

# criterion id -> (ok, detail), filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def _record(cid, ok, detail):
        ACCEPTANCE[cid] = (ok, detail)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for i in range(1, 12):
        cid = f"C{i}"
        if cid not in ACCEPTANCE:
            terminalreporter.write_line(f"ACCEPTANCE {cid} NOT RUN")
            continue
        ok, detail = ACCEPTANCE[cid]
        terminalreporter.write_line(f"ACCEPTANCE {cid} {'PASS' if ok else 'FAIL'}  {detail}")
