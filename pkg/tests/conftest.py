from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def polys(max_degree=8):
    from tasep_tq.algebra import Poly
    return st.lists(small_rationals, min_size=1, max_size=max_degree + 1).map(Poly)


# one line per acceptance criterion at the end of the run
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        key = report.nodeid.split("::test_criterion_")[1]
        _acceptance.setdefault(key, report.outcome)
        if report.outcome != "passed":
            _acceptance[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import TITLES
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance, key=lambda k: int(k.split("_")[0])):
        n = int(key.split("_")[0])
        verdict = "PASS" if _acceptance[key] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {TITLES[n]}")


__all__ = ["Fraction", "polys", "small_rationals"]
