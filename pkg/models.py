"""
Pydantic models for request and response validation.
"""
from typing import List, Literal

from pydantic import BaseModel, Field

from forbid_engine import CellResult, PhaseReport
from modular_data import TheoryExport


class ForbidRequest(BaseModel):
    """
    Forbidding request: group name (preset or group file path) and the
    non-trivial classes and irreps to forbid.
    """
    group: str = "s3"
    classes: List[str] = Field(default_factory=list)
    irreps: List[str] = Field(default_factory=list)
    mode: Literal["auto", "script"] = "auto"


class ForbidResponse(BaseModel):
    report: PhaseReport
    markdown: str


class TheoryResponse(BaseModel):
    theory: TheoryExport
    checks: dict
    anyon_kinds: dict


class CatalogSummary(BaseModel):
    name: str
    display_name: str
    labels: List[str]
    merge_maps: List[List[List[str]]] = Field(default_factory=list)
    notes: str = ""


class PhaseDiagramResponse(BaseModel):
    group: str
    cells: List[CellResult]
