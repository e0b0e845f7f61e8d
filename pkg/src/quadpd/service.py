"""HTTP service exposing the commands (run with ``uvicorn quadpd.service:app``)."""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import commands
from .parsing import ParseError


class DocumentRequest(BaseModel):
    document: str


class SeededDocumentRequest(DocumentRequest):
    seed: int = 0


class ColonRequest(DocumentRequest):
    by: str


class VerifyRequest(DocumentRequest):
    context: Optional[str] = None


class TightRequest(BaseModel):
    n: int
    characteristic: Optional[int] = None


class FuzzRequest(BaseModel):
    seed: int = 0
    trials: int = Field(1, ge=0)
    family: str = "generic"
    n_range: str = "3..5"
    variables: int = Field(8, ge=2)
    characteristic: Optional[int] = None
    jobs: int = Field(1, ge=1)


class CommandResponse(BaseModel):
    exit_code: int
    report: dict[str, Any]


class ErrorResponse(BaseModel):
    error: str
    line: Optional[int] = None
    column: Optional[int] = None


app = FastAPI(title="quadpd", version="0.1.0")


def _run(fn, *args):
    try:
        report, code = fn(*args)
    except ParseError as exc:
        body = ErrorResponse(error=exc.message, line=exc.line, column=exc.column)
        return JSONResponse(status_code=400, content=body.model_dump())
    except commands.ERRORS as exc:
        return JSONResponse(status_code=400, content=ErrorResponse(error=str(exc)).model_dump())
    return CommandResponse(exit_code=code, report=report)


_ERR = {400: {"model": ErrorResponse}}


@app.post("/pd", response_model=CommandResponse, responses=_ERR)
def pd(req: DocumentRequest):
    return _run(commands.cmd_pd, req.document)


@app.post("/resolve", response_model=CommandResponse, responses=_ERR)
def resolve(req: SeededDocumentRequest):
    return _run(commands.cmd_resolve, req.document, req.seed)


@app.post("/mult", response_model=CommandResponse, responses=_ERR)
def mult(req: DocumentRequest):
    return _run(commands.cmd_mult, req.document)


@app.post("/colon", response_model=CommandResponse, responses=_ERR)
def colon(req: ColonRequest):
    return _run(commands.cmd_colon, req.document, req.by)


@app.post("/classify-matrix", response_model=CommandResponse, responses=_ERR)
def classify_matrix(req: SeededDocumentRequest):
    return _run(commands.cmd_classify_matrix, req.document, req.seed)


@app.post("/type", response_model=CommandResponse, responses=_ERR)
def type_(req: DocumentRequest):
    return _run(commands.cmd_type, req.document)


@app.post("/tight", response_model=CommandResponse, responses=_ERR)
def tight(req: TightRequest):
    return _run(commands.cmd_tight, req.n, req.characteristic)


@app.post("/verify", response_model=CommandResponse, responses=_ERR)
def verify(req: VerifyRequest):
    return _run(commands.cmd_verify, req.document, req.context)


@app.post("/fuzz", response_model=CommandResponse, responses=_ERR)
def fuzz(req: FuzzRequest):
    return _run(commands.cmd_fuzz, req.seed, req.trials, req.family, req.n_range, req.variables,
                req.characteristic, req.jobs)


@app.post("/question2", response_model=CommandResponse, responses=_ERR)
def question2(req: DocumentRequest):
    return _run(commands.cmd_question2, req.document)


@app.get("/health")
def health():
    return {"status": "ok"}
