"""Request/response wire interface for the warehouse.

The endpoints mirror the in-process operations one-to-one (`list`,
`query`, `match`, `fetch`, `publish`) with JSON bodies that follow the
catalogue file schema, so a remote warehouse is a drop-in replacement
for a local catalogue: `HttpWarehouse` implements the same client
surface the evolution engine consumes. Every response carries the
catalogue revision.
"""

from __future__ import annotations

from typing import Any

import httpx
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import ConflictError, IntegrityError, NotFoundError, ValidationError
from .evolution import WarehouseUnreachable
from .odd import EvolutionTarget, Region
from .warehouse import Catalogue, CatalogueEntry, UsageGuide, match


class QueryBody(BaseModel):
    filter: dict[str, Any] = {}


class MatchBody(BaseModel):
    element_id: str
    version: str
    target_regions: list[list[float]]   # [c_lo, c_hi, u_lo, u_hi] boxes
    platform_tags: list[str]


class FetchBody(BaseModel):
    element_id: str
    version: str


def create_warehouse_app(catalogue: Catalogue) -> FastAPI:
    app = FastAPI(title="computing-warehouse")

    @app.get("/list")
    def list_entries():
        return {"revision": catalogue.revision,
                "entries": [e.to_dict() for e in catalogue.entries()]}

    @app.post("/query")
    def query(body: QueryBody):
        unknown = catalogue.unknown_filter_keys(body.filter) if body.filter else []
        entries = catalogue.query(body.filter)
        warnings = [f"unknown capability {name!r} in filter" for name in unknown]
        return {"revision": catalogue.revision, "warnings": warnings,
                "entries": [e.to_dict() for e in entries]}

    @app.post("/match")
    def match_entry(body: MatchBody):
        entry = next((e for e in catalogue.entries()
                      if e.key() == (body.element_id, body.version)), None)
        if entry is None:
            raise HTTPException(404, f"no entry {body.element_id}@{body.version}")
        target = EvolutionTarget(
            regions=tuple(Region(b[0], b[1], b[2], b[3]) for b in body.target_regions),
            origin="stakeholder_goal")
        result = match(entry, target, body.platform_tags)
        return {"revision": catalogue.revision,
                "result": {"element_id": result.element_id, "matched": result.matched,
                           "margin": dict(result.margin),
                           "failures": [list(f) for f in result.failures]}}

    @app.post("/fetch")
    def fetch(body: FetchBody):
        try:
            payload, guide = catalogue.fetch(body.element_id, body.version)
        except NotFoundError as exc:
            raise HTTPException(404, str(exc))
        except IntegrityError as exc:
            raise HTTPException(409, str(exc))
        return {"revision": catalogue.revision, "payload": payload,
                "usage_guide": guide.to_dict()}

    @app.post("/publish")
    def publish(entry_doc: dict):
        try:
            entry = CatalogueEntry.from_dict(entry_doc)
            revision = catalogue.publish(entry)
        except ConflictError as exc:
            raise HTTPException(409, str(exc))
        except (ValidationError, IntegrityError, KeyError) as exc:
            raise HTTPException(422, str(exc))
        return {"revision": revision, "element_id": entry.element_id,
                "version": entry.version}

    return app


class HttpWarehouse:
    """Warehouse client over the wire interface; drop-in for a Catalogue."""

    def __init__(self, base_url: str, timeout: float = 5.0, client: httpx.Client | None = None):
        self._client = client or httpx.Client(base_url=base_url, timeout=timeout)

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        try:
            response = self._client.request(method, path, **kwargs)
        except httpx.HTTPError as exc:
            raise WarehouseUnreachable(f"warehouse request failed: {exc}") from exc
        return response

    def list_entries(self) -> tuple[list[CatalogueEntry], int]:
        response = self._request("GET", "/list")
        doc = response.json()
        return [CatalogueEntry.from_dict(e) for e in doc["entries"]], doc["revision"]

    def query(self, capability_filter: dict | None = None) -> list[CatalogueEntry]:
        response = self._request("POST", "/query", json={"filter": capability_filter or {}})
        return [CatalogueEntry.from_dict(e) for e in response.json()["entries"]]

    def fetch(self, element_id: str, version: str) -> tuple[dict, UsageGuide]:
        response = self._request("POST", "/fetch",
                                 json={"element_id": element_id, "version": version})
        if response.status_code == 404:
            raise NotFoundError(response.json().get("detail", "not found"))
        if response.status_code == 409:
            raise IntegrityError(response.json().get("detail", "integrity error"))
        doc = response.json()
        return doc["payload"], UsageGuide.from_dict(doc["usage_guide"])

    def publish(self, entry: CatalogueEntry) -> int:
        response = self._request("POST", "/publish", json=entry.to_dict())
        if response.status_code == 409:
            raise ConflictError(response.json().get("detail", "conflict"))
        if response.status_code == 422:
            raise ValidationError(message=response.json().get("detail", "invalid entry"))
        return response.json()["revision"]
