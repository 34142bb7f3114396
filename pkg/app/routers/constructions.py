from typing import Any, Literal, Optional

from fastapi import APIRouter, Depends, Query, status
from sqlmodel import Session, SQLModel

from ..commands import run
from ..core.errors import EngineError, ParseError
from ..database import get_session
from .checks import RunResponse, engine_http_error, respond, run_config

router = APIRouter(
    prefix="/constructions",
    tags=["constructions"],
)


class ConstructionRequest(SQLModel):
    document: Optional[dict[str, Any]] = None
    # cob: identity | unit | an operad_map document
    morphism: str | dict[str, Any] = "identity"
    # discreteness
    monad: Optional[str] = None
    backend: str = "fingrph"
    criteria: bool = False


@router.post(
    "/{command}",
    response_model=RunResponse,
    status_code=status.HTTP_200_OK,
)
def construct(
    command: Literal["cob", "embed", "enrich", "mate", "discreteness"],
    payload: ConstructionRequest,
    depth: Optional[int] = Query(default=None, ge=1),
    samples: Optional[int] = Query(default=None, ge=0),
    seed: Optional[int] = None,
    session: Session = Depends(get_session),
):
    config = run_config(command, depth, samples, seed)
    options: dict[str, Any] = {"morphism": payload.morphism, "backend": payload.backend, "criteria": payload.criteria}
    if payload.document is not None:
        options["document"] = payload.document
    if payload.monad is not None:
        options["monad"] = payload.monad
    try:
        if command == "discreteness" and payload.monad is None:
            raise ParseError("discreteness needs a monad", {"command": command})
        result = run(config, **options)
    except EngineError as exc:
        raise engine_http_error(exc)
    return respond(session, result)
