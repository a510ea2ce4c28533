"""HTTP API: dataset upload, binning, refinement."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from binsmith.ingest import parse_csv, profile
from binsmith.legibility import default_bins
from binsmith.pipeline import table_from_json
from binsmith.service import create_app

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def client(lookup_path):
    lookup = table_from_json(lookup_path.read_text())
    return TestClient(create_app(lookup=lookup))


@pytest.fixture(scope="module")
def dataset_id(client):
    r = client.post("/api/dataset", content=(FIXTURES / "ages.csv").read_bytes())
    assert r.status_code == 200
    return r.json()["dataset_id"]


class TestDatasetUpload:
    def test_fields_and_profiles(self, client):
        r = client.post("/api/dataset", content=(FIXTURES / "ages.csv").read_bytes())
        body = r.json()
        fields = {f["name"]: f for f in body["fields"]}
        assert fields["age"]["numeric"] and fields["age"]["profile"]["n"] > 0
        assert not fields["name"]["numeric"]
        assert fields["name"]["profile"] is None

    def test_bad_csv_400(self, client):
        r = client.post("/api/dataset", content=b"a,b\n1\n")
        assert r.status_code == 400


class TestBinEndpoint:
    def test_semantic_choice_with_alternative(self, client, dataset_id):
        r = client.post("/api/bin", json={"dataset_id": dataset_id, "field": "age"})
        body = r.json()
        assert body["scheme"]["provenance"]["kind"] == "semantic"
        assert body["alternatives"][0]["provenance"]["kind"] == "default"
        assert sum(body["counts"]["counts"]) + body["counts"]["below"] + body["counts"]["above"] == body["profile"]["n"]

    def test_forced_default_equals_library(self, client, dataset_id):
        r = client.post("/api/bin", json={"dataset_id": dataset_id, "field": "age",
                                          "forced_mode": "default"})
        got = r.json()["scheme"]
        column = parse_csv((FIXTURES / "ages.csv").read_bytes()).column("age")
        prof = profile(list(column.values))
        clean = [v for v in column.values if v is not None]
        from binsmith.core import scheme_to_dict

        assert got == scheme_to_dict(default_bins(prof, clean))

    def test_purpose_color_ramp(self, client, dataset_id):
        r = client.post("/api/bin", json={"dataset_id": dataset_id, "field": "fare",
                                          "purpose": "color_ramp"})
        assert len(r.json()["scheme"]["labels"]) <= 12

    def test_overrides_applied(self, client, dataset_id):
        r = client.post("/api/bin", json={"dataset_id": dataset_id, "field": "fare",
                                          "forced_mode": "default",
                                          "overrides": {"max_bins_histogram": 4}})
        assert len(r.json()["scheme"]["labels"]) <= 4

    def test_unknown_dataset_404(self, client):
        r = client.post("/api/bin", json={"dataset_id": "missing", "field": "age"})
        assert r.status_code == 404

    def test_unknown_field_404(self, client, dataset_id):
        r = client.post("/api/bin", json={"dataset_id": dataset_id, "field": "ghost"})
        assert r.status_code == 404

    def test_non_numeric_422(self, client, dataset_id):
        r = client.post("/api/bin", json={"dataset_id": dataset_id, "field": "name"})
        assert r.status_code == 422


class TestRefineEndpoint:
    def test_age_brackets_no_violations(self, client, dataset_id):
        r = client.post("/api/refine", json={
            "dataset_id": dataset_id, "field": "age",
            "edges": [0, 18, 25, 35, 45, 55, 65], "open_high": True,
        })
        body = r.json()
        assert r.status_code == 200
        assert body["scheme"]["provenance"]["kind"] == "manual"
        assert body["violations"] == []
        assert sum(body["counts"]["counts"]) + body["counts"]["below"] + body["counts"]["above"] == body["profile"]["n"]

    def test_non_increasing_edges_422(self, client, dataset_id):
        r = client.post("/api/refine", json={
            "dataset_id": dataset_id, "field": "age", "edges": [0, 0],
        })
        assert r.status_code == 422

    def test_off_grain_edge_flagged(self, client, dataset_id):
        r = client.post("/api/refine", json={
            "dataset_id": dataset_id, "field": "age", "edges": [0, 18.5, 40, 80],
        })
        body = r.json()
        assert body["invariants"]["grain"] is False
        assert "grain" in body["violations"]

    def test_nice_toggle_off_still_reports_flag(self, client, dataset_id):
        r = client.post("/api/refine", json={
            "dataset_id": dataset_id, "field": "age",
            "edges": [0, 30, 60, 90], "toggles": {"nice": False},
        })
        body = r.json()
        assert body["invariants"]["nice"] is False
        assert "nice" not in body["violations"]

    def test_counts_recomputed(self, client, dataset_id):
        r = client.post("/api/refine", json={
            "dataset_id": dataset_id, "field": "age", "edges": [0, 100],
        })
        body = r.json()
        assert sum(body["counts"]["counts"]) == body["profile"]["n"]


class TestResponseSchema:
    def test_refine_response_schema_valid(self, client, dataset_id, schemas):
        import jsonschema
        from referencing import Registry, Resource

        r = client.post("/api/refine", json={
            "dataset_id": dataset_id, "field": "age",
            "edges": [0, 18, 25, 35, 45, 55, 65], "open_high": True,
        })
        registry = Registry().with_resources([
            (schemas["bin_scheme"]["$id"], Resource.from_contents(schemas["bin_scheme"])),
        ])
        validator = jsonschema.Draft202012Validator(schemas["bin_response"], registry=registry)
        validator.validate(r.json())
