import uuid
from datetime import datetime

from sqlmodel import Field, SQLModel


class RunRecord(SQLModel, table=True):
    __tablename__ = "runs"

    id: uuid.UUID = Field(default_factory=uuid.uuid4, primary_key=True, index=True)

    # check | cob | embed | enrich | mate | discreteness
    command: str = Field(index=True, max_length=20)
    title: str = Field(default="", max_length=255)

    passed: bool = Field(default=False, index=True)
    exit_code: int = Field(default=0)

    # serialized report, and the output structure when the command produced one
    report: str
    output: str | None = None

    created_at: datetime = Field(default_factory=datetime.utcnow)
