import pytest

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__.endswith("test_acceptance"):
        _ACCEPTANCE[item.name] = rep.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria results:")
    for name in sorted(_ACCEPTANCE):
        verdict = "PASS" if _ACCEPTANCE[name] else "FAIL"
        terminalreporter.write_line(f"  [{verdict}] {name}")
