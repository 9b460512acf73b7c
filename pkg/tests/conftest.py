import functools

import pytest
from hypothesis import settings

from covhom import builders
from covhom.fox import heisenberg, triangulate_presentation, trefoil

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


@functools.lru_cache(maxsize=None)
def corpus_space(name: str):
    """(X, circle map) for every complex in the worked corpus."""
    if name == "circle":
        return builders.circle()
    if name == "torus":
        return builders.torus()
    if name == "klein":
        return builders.klein_bottle()
    if name == "wedge":
        return builders.wedge_of_circles()
    if name == "heisenberg":
        return triangulate_presentation(heisenberg())
    if name == "trefoil":
        return triangulate_presentation(trefoil())
    raise KeyError(name)


COMPLEXES = ("circle", "torus", "klein", "wedge", "heisenberg", "trefoil")


@pytest.fixture(params=COMPLEXES)
def corpus_instance(request):
    return request.param, *corpus_space(request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
