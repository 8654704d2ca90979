import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo every acceptance gate's verdict lines after capture ends.

    Both test suites (library and trainer) expose a VERDICTS list in a
    module named test_acceptance; capture would swallow prints from the
    tests themselves, so the lines are emitted here instead.
    """
    modules, seen = [], set()
    for name, module in sorted(sys.modules.items()):
        if name.rpartition(".")[2] != "test_acceptance":
            continue
        if getattr(module, "VERDICTS", None) and id(module) not in seen:
            seen.add(id(module))
            modules.append(module)
    if not modules:
        return
    terminalreporter.section("acceptance gate")
    for module in modules:
        for line in module.VERDICTS:
            terminalreporter.write_line(line)
