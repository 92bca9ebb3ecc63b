"""
API routes for the anyon phase-transition toolkit.
"""
import logging
import os
import traceback

from fastapi import APIRouter, HTTPException
from fastapi.responses import HTMLResponse

from catalog import builtin_entries
from errors import INPUT_ERRORS, AnyonError, NoValidTheory, ScriptStepFailed, UnknownTheory
from flavor_diagram import build_diagram, export_diagram, spec_from_names
from forbid_engine import double_theory, enumerate_diagram, load_scripts, run_auto, run_script, script_spec
from group_core import resolve_group
from presets import get_preset
from models import CatalogSummary, ForbidRequest, ForbidResponse, PhaseDiagramResponse, TheoryResponse
from modular_data import export_theory, validate_theory
from tasks import run_blocking
from utils import format_response_as_html, render_report

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api")


def _http_error(e: AnyonError) -> HTTPException:
    if isinstance(e, UnknownTheory):
        status_code = 404
    else:
        status_code = 400 if isinstance(e, INPUT_ERRORS) else 422
    return HTTPException(status_code=status_code,
                         detail={"error": type(e).__name__, "detail": str(e), "context": {k: str(v) for k, v in e.context.items()}})


def _load_group(name: str):
    if get_preset(name) is None and not os.path.isfile(name):
        raise HTTPException(status_code=404, detail=f"unknown group '{name}'")
    return resolve_group(name)


def _forbid(request: ForbidRequest):
    G = _load_group(request.group)
    spec = spec_from_names(G, request.classes, request.irreps)
    if request.mode == "script":
        for script in load_scripts(G.name):
            if script_spec(G, script) == spec:
                return run_script(G, spec, script)
        raise HTTPException(status_code=404, detail=f"no transition script for {request.classes + request.irreps}")
    return run_auto(G, spec)


async def _forbid_or_raise(request: ForbidRequest):
    try:
        return await run_blocking(_forbid, request)
    except HTTPException:
        raise
    except NoValidTheory as e:
        raise HTTPException(status_code=422, detail={
            "error": "NoValidTheory", "detail": str(e),
            "report": e.report.model_dump() if e.report is not None else None})
    except ScriptStepFailed as e:
        raise HTTPException(status_code=422, detail={
            "error": "ScriptStepFailed", "detail": str(e), "step": e.step_index, "diff": e.diff})
    except AnyonError as e:
        raise _http_error(e)
    except Exception as e:
        logger.error("forbid request failed: %s", e)
        traceback.print_exc()
        raise HTTPException(status_code=500, detail=f"Error: {str(e)}")


@router.get("/groups/{name}/theory", response_model=TheoryResponse)
async def get_theory(name: str):
    try:
        G = _load_group(name)
        theory = await run_blocking(double_theory, G)
    except AnyonError as e:
        raise _http_error(e)
    report = validate_theory(theory)
    return TheoryResponse(theory=export_theory(theory), checks=report.checks,
                          anyon_kinds={a.display_name: a.kind for a in theory.anyons})


@router.get("/groups/{name}/diagram")
async def get_diagram(name: str):
    try:
        G = _load_group(name)
        diagram = await run_blocking(build_diagram, G)
    except AnyonError as e:
        raise _http_error(e)
    return export_diagram(diagram)


@router.get("/groups/{name}/phases", response_model=PhaseDiagramResponse)
async def get_phase_diagram(name: str):
    try:
        G = _load_group(name)
        cells = await run_blocking(enumerate_diagram, G)
    except AnyonError as e:
        raise _http_error(e)
    return PhaseDiagramResponse(group=G.name, cells=cells)


@router.post("/forbid", response_model=ForbidResponse)
async def forbid(request: ForbidRequest):
    report = await _forbid_or_raise(request)
    return ForbidResponse(report=report, markdown=render_report(report))


@router.post("/forbid/html", response_class=HTMLResponse)
async def forbid_html(request: ForbidRequest):
    report = await _forbid_or_raise(request)
    return HTMLResponse(content=format_response_as_html(render_report(report)))


@router.get("/catalog", response_model=list[CatalogSummary])
async def get_catalog():
    return [CatalogSummary(name=e.name, display_name=e.display_name, labels=list(e.labels),
                           merge_maps=[[list(g) for g in m] for m in e.merge_maps], notes=e.notes)
            for e in builtin_entries()]
