import pytest
from hypothesis import settings

from qtrace.surface import builtin, parse_surface

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

FIXTURES = ("T3", "S4", "P5", "A11")


def tri(name):
    return parse_surface(builtin(name))


@pytest.fixture(params=FIXTURES)
def fixture_name(request):
    return request.param
