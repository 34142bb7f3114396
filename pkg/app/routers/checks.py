import json
from typing import Any, Optional

from fastapi import APIRouter, Body, Depends, HTTPException, Query, status
from sqlmodel import Session, SQLModel

from ..commands import RunResult, cmd_check
from ..config import RunConfig
from ..core.errors import EngineError
from ..database import get_session
from .runs import record_run

router = APIRouter(
    prefix="/checks",
    tags=["checks"],
)


# ─────────────────────────────
#   SCHEMAS
# ─────────────────────────────

class RunResponse(SQLModel):
    run_id: Optional[str] = None
    command: str
    passed: bool
    exit_code: int
    summary: Optional[str] = None
    report: dict
    output: Optional[dict] = None


def run_config(
    command: str,
    depth: Optional[int] = Query(default=None, ge=1),
    samples: Optional[int] = Query(default=None, ge=0),
    seed: Optional[int] = None,
) -> RunConfig:
    return RunConfig.from_settings(command=command, depth=depth, samples=samples, seed=seed, report="json")


def engine_http_error(exc: EngineError) -> HTTPException:
    """Parse errors → 400, violations → 422, failed hypotheses → 409, bounds → 413."""
    return HTTPException(status_code=exc.http_status, detail=exc.as_dict())


def respond(session: Session, result: RunResult) -> RunResponse:
    run = record_run(session, result)
    return RunResponse(
        run_id=str(run.id),
        command=result.command,
        passed=result.passed,
        exit_code=result.exit_code,
        summary=result.summary,
        report=json.loads(result.report.to_json()),
        output=result.output,
    )


# ─────────────────────────────
#   ENDPOINTS
# ─────────────────────────────

@router.post(
    "",
    response_model=RunResponse,
    status_code=status.HTTP_200_OK,
)
def run_checks(
    documents: Any = Body(...),
    depth: Optional[int] = Query(default=None, ge=1),
    samples: Optional[int] = Query(default=None, ge=0),
    seed: Optional[int] = None,
    session: Session = Depends(get_session),
):
    """Check one structure document, or a list of them."""
    config = run_config("check", depth, samples, seed)
    items = documents if isinstance(documents, list) else [documents]
    try:
        result = cmd_check(config, items)
    except EngineError as exc:
        raise engine_http_error(exc)
    return respond(session, result)
