"""HTTP front end over the command layer.

Run with ``vixjumps serve`` or ``uvicorn vixjumps.service:app``. The CLI in
``--server`` mode posts the same requests and prints the returned rows.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, commands
from .errors import ConfigError, DomainError, NumericError
from .schemas import (
    AsymRequest,
    ConvergeRequest,
    ErrorResponse,
    ForwardRequest,
    MCRequest,
    RowsResponse,
    TableResponse,
)
from .tables import TABLES, TableId


def _rows(res: commands.CommandResult) -> RowsResponse:
    return RowsResponse(columns=list(res.columns), rows=res.rows, exit_code=res.exit_code, messages=res.messages)


def _source(req) -> commands.Source:
    return commands.resolve_source(req.table.value if req.table else None, req.config)


def _underlying(req, src):
    return req.underlying or src.underlying or "equity"


def create_app() -> FastAPI:
    app = FastAPI(title="vixjumps", version=__version__)

    @app.exception_handler(DomainError)
    @app.exception_handler(ConfigError)
    async def _usage(_: Request, exc: Exception):
        return JSONResponse(status_code=422, content=ErrorResponse(kind="usage", message=str(exc)).model_dump())

    @app.exception_handler(NumericError)
    async def _numeric(_: Request, exc: NumericError):
        return JSONResponse(status_code=500, content=ErrorResponse(kind="numeric", message=str(exc)).model_dump())

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/tables", response_model=list[TableResponse])
    def tables():
        return [TableResponse(table_id=t.table_id, title=t.title, underlying=t.underlying, scale=t.scale,
                              cells=len(t.cells)) for t in TABLES.values()]

    @app.post("/asym", response_model=RowsResponse)
    def asym(req: AsymRequest):
        src = _source(req)
        return _rows(commands.cmd_asym(src, _underlying(req, src), req.strikes, req.moneyness, req.kind,
                                       req.method, req.scaled, req.bs_forward))

    @app.post("/mc", response_model=RowsResponse)
    def mc(req: MCRequest):
        src = _source(req)
        return _rows(commands.cmd_mc(src, _underlying(req, src), req.strikes, req.moneyness, req.kind,
                                     req.maturity, req.paths, req.steps, req.seed, req.antithetic, req.scaled,
                                     req.workers))

    @app.post("/forward", response_model=RowsResponse)
    def forward(req: ForwardRequest):
        return _rows(commands.cmd_forward(_source(req), req.maturity, req.paths, req.steps, req.seed,
                                          req.antithetic, req.workers))

    @app.post("/converge", response_model=RowsResponse)
    def converge(req: ConvergeRequest):
        src = _source(req)
        return _rows(commands.cmd_converge(src, _underlying(req, src), req.strike, req.kind, req.maturities,
                                           req.paths, req.steps, req.seed, req.antithetic, req.workers))

    @app.get("/reproduce/{table_id}", response_model=RowsResponse)
    def reproduce(table_id: TableId, mc: bool = False, seed: int = 2024, paths: int | None = None,
                  workers: int = 1):
        return _rows(commands.cmd_reproduce(table_id.value, mc, seed, paths, workers))

    return app


app = create_app()
