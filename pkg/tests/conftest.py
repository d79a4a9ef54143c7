"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_criteria = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    failed = report.failed or _criteria.get(key, ("PASS",))[0] == "FAIL"
    if report.when == "call" or report.failed:
        _criteria[key] = ("FAIL" if failed else "PASS", props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k.split(".")[0])):
        status, detail = _criteria[key]
        line = f"{status}  {key}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
