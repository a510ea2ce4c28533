import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def lookup_path(tmp_path_factory) -> Path:
    """A lookup table built once from the fixture corpora."""
    from binsmith.cli import main

    out = tmp_path_factory.mktemp("lookup") / "lookup.json"
    code = main([
        "build-lookup",
        "--concepts", str(FIXTURES / "concepts.json"),
        "--fields", str(FIXTURES / "field_names.txt"),
        "--surveys", str(FIXTURES / "surveys.jsonl"),
        "--iters", "400",
        "--seed", "11",
        "--out", str(out),
    ])
    assert code == 0
    return out


@pytest.fixture(scope="session")
def schemas() -> dict:
    docs = Path(__file__).parent.parent / "docs" / "schemas"
    return {
        path.stem.replace(".schema", ""): json.loads(path.read_text())
        for path in docs.glob("*.schema.json")
    }
