import uuid
from datetime import datetime
from typing import List

from fastapi import APIRouter, Depends, HTTPException, status
from sqlmodel import Session, SQLModel, select

from ..commands import RunResult
from ..database import get_session
from ..models.run import RunRecord

router = APIRouter(
    prefix="/runs",
    tags=["runs"],
)


class RunRead(SQLModel):
    id: uuid.UUID
    command: str
    title: str
    passed: bool
    exit_code: int
    report: str
    output: str | None = None
    created_at: datetime


def record_run(session: Session, result: RunResult) -> RunRecord:
    run = RunRecord(
        command=result.command,
        title=result.report.title[:255],
        passed=result.passed,
        exit_code=result.exit_code,
        report=result.report.to_json(),
        output=result.output_json(),
    )
    session.add(run)
    session.commit()
    session.refresh(run)
    return run


@router.get(
    "",
    response_model=List[RunRead],
    status_code=status.HTTP_200_OK,
)
def list_runs(
    command: str | None = None,
    session: Session = Depends(get_session),
):
    stmt = select(RunRecord)
    if command:
        stmt = stmt.where(RunRecord.command == command)
    stmt = stmt.order_by(RunRecord.created_at.desc())
    return list(session.exec(stmt).all())


@router.get(
    "/{run_id}",
    response_model=RunRead,
    status_code=status.HTTP_200_OK,
)
def get_run(
    run_id: uuid.UUID,
    session: Session = Depends(get_session),
):
    run = session.get(RunRecord, run_id)
    if not run:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail="Run not found")
    return run
