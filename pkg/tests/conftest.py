import json
from functools import lru_cache

from hypothesis import HealthCheck, settings

from stringycoh.documents import fixture_path, package_from_document

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load_fixture_doc(name: str) -> dict:
    return json.loads(fixture_path(name).read_text())


@lru_cache(maxsize=None)
def fixture_package(name: str):
    mode = "simplicial" if name.endswith("smoothpoint") or name == "pinched_torus" else "ranks"
    return package_from_document(load_fixture_doc(name), mode)
