"""HTTP service: /api/v1 endpoints for triage, labeling, and statistics.

The service is a thin, read-mostly view over the snapshot store plus the
single-writer instance log. Blob responses are content-addressed and
immutable, so clients may cache them forever.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import FileResponse
from pydantic import BaseModel, Field

from darkscope.errors import StoreIntegrityError
from darkscope.store import SnapshotStore
from darkscope.taxonomy.instances import (
    DuplicateInstanceError,
    EvidenceError,
    InstanceStore,
    PatternInstance,
)
from darkscope.taxonomy.registry import load_taxonomy
from darkscope.taxonomy.stats import AgreementRecord, StatsError, cohens_kappa, prevalence_report
from darkscope.corpus.build import read_corpus_file

_MEDIA_TYPES = {"src": "text/html", "shot": "image/png", "har": "application/gzip"}


class LabelIn(BaseModel):
    site: str
    pattern_type: str
    segment_refs: list[str] = Field(min_length=1)
    screenshot_refs: list[str] = Field(default_factory=list)
    deceptive: bool = False
    labeler: str = ""
    note: str = ""


class FlagIn(BaseModel):
    cluster_id: int
    flagged: bool
    analyst: str = ""


class AgreementIn(BaseModel):
    items: list[str]
    coder_a: list[str]
    coder_b: list[str]


def create_app(store_root: str | Path, frontend_dir: str | Path | None = None) -> FastAPI:
    store = SnapshotStore(store_root)
    taxonomy = load_taxonomy()
    segment_rows = {row["seg_id"]: row for row in store.read_index("segments")}
    snapshot_rows = {row["snapshot_id"]: row for row in store.read_index("snapshots")}

    def resolver(ref: str) -> bool:
        return ref in segment_rows or ref in snapshot_rows or store.has_blob(ref)

    instances = InstanceStore(store.root / "labels.ndjson", taxonomy, resolver=resolver)

    clusters_path = store.root / "clusters" / "clusters.json"
    cluster_doc = json.loads(clusters_path.read_text()) if clusters_path.is_file() else {"summaries": []}
    summaries = {int(s["cluster_id"]): s for s in cluster_doc.get("summaries", [])}

    corpus_path = store.root / "corpus.tsv"
    corpus = (
        [(r.domain, r.rank) for r in read_corpus_file(corpus_path)] if corpus_path.is_file() else []
    )

    app = FastAPI(title="darkscope", version="0.1.0")

    # -- taxonomy -----------------------------------------------------------------

    @app.get("/api/v1/taxonomy")
    def get_taxonomy():
        return {
            "categories": list(taxonomy.categories),
            "biases": list(taxonomy.biases),
            "types": [
                {
                    "name": t.name,
                    "category": t.category,
                    "description": t.description,
                    "characteristics": t.characteristics,
                    "biases": list(t.biases),
                }
                for t in taxonomy.types
            ],
        }

    # -- clusters -------------------------------------------------------------------

    def _flag_state() -> dict[int, bool]:
        state: dict[int, bool] = {}
        for row in store.read_index("flags"):
            state[int(row["cluster_id"])] = bool(row["flagged"])
        return state

    @app.get("/api/v1/clusters")
    def list_clusters(sort: str = "size", order: str = "desc", offset: int = 0, limit: int = 100):
        items = [s for cid, s in summaries.items() if cid >= 0]
        keys = {
            "size": lambda s: s["size"],
            "top_token": lambda s: (s["top_tokens"][0][0] if s["top_tokens"] else ""),
            "site_spread": lambda s: len(s["sites"]),
            "id": lambda s: s["cluster_id"],
        }
        if sort not in keys:
            raise HTTPException(422, f"bad sort key {sort!r}")
        items.sort(key=keys[sort], reverse=(order == "desc"))
        flags = _flag_state()
        page = items[offset : offset + limit]
        return {
            "total": len(items),
            "noise": summaries.get(-1, {}).get("size", 0),
            "clusters": [
                {**s, "flagged": flags.get(int(s["cluster_id"]), False)} for s in page
            ],
        }

    @app.get("/api/v1/clusters/{cluster_id}")
    def cluster_detail(cluster_id: int):
        summary = summaries.get(cluster_id)
        if summary is None:
            raise HTTPException(404, f"no cluster {cluster_id}")
        assignments_path = store.root / "clusters" / "assignments.tsv"
        members = []
        if assignments_path.is_file():
            wanted = str(cluster_id)
            for line in assignments_path.read_text(encoding="utf-8").splitlines():
                text, label, dup_count, refs = line.split("\t")
                if label != wanted:
                    continue
                sources = []
                for ref in refs.split(";"):
                    if "|" not in ref:
                        continue
                    site, seg_id = ref.split("|", 1)
                    row = segment_rows.get(seg_id, {})
                    snap = snapshot_rows.get(row.get("snapshot_id", ""), {})
                    sources.append({
                        "site": site,
                        "seg_id": seg_id,
                        "snapshot_id": row.get("snapshot_id"),
                        "screenshot_ref": snap.get("screenshot_ref"),
                        "page_url": row.get("page_url"),
                    })
                members.append({"text": text, "duplicate_count": int(dup_count),
                                "sources": sources})
        return {**summary, "flagged": _flag_state().get(cluster_id, False), "members": members}

    @app.post("/api/v1/flags")
    def set_flag(flag: FlagIn):
        if flag.cluster_id not in summaries:
            raise HTTPException(404, f"no cluster {flag.cluster_id}")
        store.append_index("flags", flag.model_dump())
        return {"cluster_id": flag.cluster_id, "flagged": flag.flagged}

    @app.get("/api/v1/flags")
    def get_flags():
        return {"flags": [{"cluster_id": c, "flagged": f} for c, f in sorted(_flag_state().items())]}

    # -- labels ---------------------------------------------------------------------

    @app.post("/api/v1/labels", status_code=201)
    def post_label(label: LabelIn):
        instance = PatternInstance(
            site=label.site,
            pattern_type=label.pattern_type,
            segment_refs=label.segment_refs,
            screenshot_refs=label.screenshot_refs,
            deceptive=label.deceptive,
            labeler=label.labeler,
            note=label.note,
        )
        try:
            instance_id = instances.register(instance)
        except DuplicateInstanceError as exc:
            raise HTTPException(409, str(exc)) from exc
        except EvidenceError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"instance_id": instance_id}

    @app.get("/api/v1/labels")
    def get_labels(labeler: str | None = None):
        rows = instances.all()
        if labeler:
            rows = [r for r in rows if r.labeler == labeler]
        return {"labels": [
            {
                "instance_id": r.instance_id,
                "site": r.site,
                "pattern_type": r.pattern_type,
                "segment_refs": r.segment_refs,
                "screenshot_refs": r.screenshot_refs,
                "deceptive": r.deceptive,
                "labeler": r.labeler,
            }
            for r in rows
        ]}

    # -- agreement ----------------------------------------------------------------

    @app.post("/api/v1/agreement")
    def agreement(record: AgreementIn):
        try:
            rec = AgreementRecord(tuple(record.items), tuple(record.coder_a), tuple(record.coder_b))
            kappa = cohens_kappa(rec)
        except StatsError as exc:
            raise HTTPException(422, str(exc)) from exc
        disagreements = [
            {"item": item, "coder_a": a, "coder_b": b}
            for item, a, b in zip(record.items, record.coder_a, record.coder_b)
            if a != b
        ]
        return {"kappa": kappa, "n_items": len(record.coder_a), "disagreements": disagreements}

    @app.get("/api/v1/agreement/{coder_a}/{coder_b}")
    def agreement_from_labels(coder_a: str, coder_b: str):
        by_coder: dict[str, dict[str, str]] = {coder_a: {}, coder_b: {}}
        for inst in instances.all():
            if inst.labeler in by_coder:
                by_coder[inst.labeler][inst.segment_refs[0]] = inst.pattern_type
        shared = sorted(set(by_coder[coder_a]) & set(by_coder[coder_b]))
        if not shared:
            raise HTTPException(409, "no shared labeled items yet")
        rec = AgreementRecord(
            tuple(shared),
            tuple(by_coder[coder_a][s] for s in shared),
            tuple(by_coder[coder_b][s] for s in shared),
        )
        return {"kappa": cohens_kappa(rec), "n_items": len(shared)}

    # -- report and blobs ---------------------------------------------------------

    @app.get("/api/v1/report")
    def get_report():
        if not corpus:
            raise HTTPException(409, "no corpus file in store; run the corpus stage")
        report = prevalence_report(instances.all(), corpus)
        return report.to_dict()

    @app.get("/api/v1/blobs/{ref}")
    def get_blob(ref: str):
        try:
            data = store.get_blob(ref)
        except StoreIntegrityError as exc:
            raise HTTPException(404, str(exc)) from exc
        kind, _ = store.parse_ref(ref)
        return Response(
            content=data,
            media_type=_MEDIA_TYPES.get(kind, "application/octet-stream"),
            headers={"Cache-Control": "public, max-age=31536000, immutable"},
        )

    @app.get("/api/v1/segments/{seg_id}/screenshot")
    def segment_screenshot(seg_id: str):
        row = segment_rows.get(seg_id)
        if row is None:
            raise HTTPException(404, f"no segment {seg_id}")
        snap = snapshot_rows.get(row.get("snapshot_id", ""))
        if not snap or not snap.get("screenshot_ref"):
            raise HTTPException(404, "segment has no screenshot")
        return get_blob(snap["screenshot_ref"])

    # -- console assets --------------------------------------------------------------

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        frontend = Path(frontend_dir)

        @app.get("/")
        def index():
            return FileResponse(frontend / "index.html")

        @app.get("/assets/{path:path}")
        def assets(path: str):
            target = (frontend / path).resolve()
            if not str(target).startswith(str(frontend.resolve())) or not target.is_file():
                raise HTTPException(404, "not found")
            return FileResponse(target)

    return app
