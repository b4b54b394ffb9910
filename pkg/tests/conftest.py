"""Shared pytest config: prints one PASS/FAIL line per acceptance criterion."""

ACCEPTANCE_LABELS = {
    "test_c01": "criterion 1: mapping identities at device constants",
    "test_c02": "criterion 2: inverse/forward round trip on 1000 random positions",
    "test_c03": "criterion 3: mapping linearity on 1000 random pairs",
    "test_c04": "criterion 4: plant/PID arithmetic vs brute-force oracle",
    "test_c05": "criterion 5: closed-loop convergence with default gains",
    "test_c06": "criterion 6: near-pass smoothing benefit",
    "test_c07": "criterion 7: renderer tip vs analytic and wall-face oracle",
    "test_c08": "criterion 8: rim-walk FOV containment",
    "test_c09": "criterion 9: byte-identical deterministic tick logs",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            key = name.split("[")[0][:8]
            label = ACCEPTANCE_LABELS.get(key)
            if label:
                status = "PASS" if outcome == "passed" else "FAIL"
                lines.append((key, f"{status}  {label}"))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(set(lines)):
            terminalreporter.write_line(line)
