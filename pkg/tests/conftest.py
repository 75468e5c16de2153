import pytest

from revolve.bodies import Ball, Cylinder, DoubleCone, PBody, SegmentBody

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, seconds, detail = ACCEPTANCE[k]
        terminalreporter.write_line(
            f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.2f}s)  {detail}"
        )


CONVEX = [Ball(), DoubleCone(), Cylinder(), PBody(3.0), PBody(4.0), SegmentBody(2.0, 1.0)]


@pytest.fixture(params=CONVEX, ids=lambda b: type(b).__name__ + getattr(b, "p", "").__str__())
def convex_body(request):
    return request.param
