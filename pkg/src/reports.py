"""Report and run-configuration models.

Reports are written as sorted-key JSON without timestamps so that the same
configuration and seed always give byte-identical files.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src import __version__
from src.errors import ConfigError

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    """Resolved parameters of one command invocation"""
    model_config = ConfigDict(extra='forbid')

    command: str
    model: Optional[str] = None
    expressions: List[str] = Field(default_factory=list)
    lo: Optional[int] = None
    hi: Optional[int] = None
    gap: Optional[int] = Field(default=None, ge=1)
    run: Optional[int] = Field(default=None, ge=1)
    span: Optional[int] = Field(default=None, ge=1)
    word_length: Optional[int] = Field(default=None, ge=1)
    samples: Optional[int] = Field(default=None, ge=1)
    rule: Optional[str] = None
    ell: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None  # only for commands that draw random samples
    format: str = 'json'
    out: Optional[str] = None
    extra: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def check_window(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"window lower bound {self.lo} exceeds upper bound {self.hi}")
        if self.format not in ('json', 'csv'):
            raise ValueError(f"unknown output format '{self.format}'")
        return self


def make_run_config(**kwargs):
    try:
        return RunConfig(**kwargs)
    except ValidationError as e:
        raise ConfigError(f"invalid parameters: {e.errors()[0]['msg']}")


class VerdictEntry(BaseModel):
    family: str
    gap: Optional[int] = None
    run: Optional[int] = None
    span: Optional[int] = None
    holds: bool
    witness: int


class ClassificationReport(BaseModel):
    lo: int
    hi: int
    members: int
    undecided: int
    max_gap: int
    longest_run: int
    run_start_gaps: Dict[int, Optional[int]]
    verdicts: List[VerdictEntry]

    def verdict(self, family, **params):
        for v in self.verdicts:
            if v.family == family and all(getattr(v, k) == val for k, val in params.items()):
                return v
        return None


class BaseCoverage(BaseModel):
    base: int
    hits: List[int]
    coverage: float
    first_full_n: Optional[int] = None


class CoverageReport(BaseModel):
    polynomials: List[str]
    word_length: int
    lo: int
    hi: int
    alphabet_words: List[str]
    cells: int
    bases: List[BaseCoverage]
    coverage_fraction: float
    full_coverage_fraction: float


class GroupCheckReport(BaseModel):
    model: str
    s: int
    samples: int
    seed: int
    checks: Dict[str, int]
    failures: List[List[str]]
    violations: int


class NestedReport(BaseModel):
    polynomials: List[str]
    shifts: List[int]
    chains: List[List[Dict[str, Any]]]
    verified: bool


class Envelope(BaseModel):
    version: str = __version__
    config: RunConfig
    result: Any


def dump_report(config, result):
    """Deterministic JSON text for a report"""
    if isinstance(result, BaseModel):
        result = result.model_dump(mode='json')
    envelope = Envelope(config=config, result=result)
    return json.dumps(envelope.model_dump(mode='json'), sort_keys=True, indent=2) + '\n'


def write_report(config, result, path):
    try:
        text = dump_report(config, result)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"Report written to {path}")
        return path
    except Exception as e:
        logger.error(f"Error writing report: {str(e)}")
        raise
