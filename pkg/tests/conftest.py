from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "exact",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("exact")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        if n not in results:
            terminalreporter.write_line(f"AC{n:<2} NOT RUN")
            continue
        title, ok, elapsed, limit = results[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"AC{n:<2} {status}  {title}  ({elapsed:.2f} s, limit {limit:g} s)")
