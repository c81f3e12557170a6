"""HTTP service wrapping the discrimination engine.

FastAPI application with pydantic request/response models.  The CLI in
:mod:`qudisc.cli` is a thin client of this service; by default it mounts
the app in-process, so the HTTP layer is exercised even without a
running server.

Error mapping: configuration problems (bad example names, impossible
factorizations, out-of-range probabilities, …) surface as HTTP 400 with
a structured body; anything else raised by the engine becomes HTTP 500.
Request-shape problems are FastAPI's usual 422.
"""

from __future__ import annotations

import cmath
from typing import Any

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from . import __version__
from .circuits import emit_qasm
from .errors import ConfigurationError, InvalidSpecError, QudiscError
from .experiments import (
    ExperimentConfig,
    run_experiment,
    run_suboptimal,
)
from .schemes import (
    EXAMPLES,
    MEASUREMENTS,
    PRIMITIVES,
    SchemeSpec,
    assemble_plan,
)
from .simulator import NoiseModel
from .theory import UnitaryPair, discrimination_report, example_pair

# --------------------------------------------------------------------------
# request / response models
# --------------------------------------------------------------------------

# A complex number on the wire is a [real, imag] pair; a 2x2 matrix is a
# list of two rows of two such pairs.
ComplexPair = tuple[float, float]
Matrix2x2 = tuple[tuple[ComplexPair, ComplexPair], tuple[ComplexPair, ComplexPair]]


def _to_ndarray(m: Matrix2x2) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in m])


def _from_ndarray(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


class NoiseParams(BaseModel):
    """Stochastic Pauli + readout noise strengths."""

    p1: float = Field(0.0, ge=0.0, le=1.0)
    p2: float = Field(0.0, ge=0.0, le=1.0)
    p_read: float = Field(0.0, ge=0.0, le=1.0)

    def to_model(self) -> NoiseModel:
        return NoiseModel(p1=self.p1, p2=self.p2, p_read=self.p_read)


class TheoryRequest(BaseModel):
    """Either a named example pair or two explicit 2x2 unitaries.

    ``n_copies`` scales the named examples (their relative rotation angle
    is pi/n_copies); explicit matrices are used as given.
    """

    example: str | None = None
    n_copies: int | None = None
    u: Matrix2x2 | None = None
    v: Matrix2x2 | None = None

    @model_validator(mode="after")
    def _one_source(self) -> "TheoryRequest":
        named = self.example is not None
        explicit = self.u is not None or self.v is not None
        if named == explicit:
            raise ValueError("provide either example+n_copies or u+v, not both")
        if named and self.n_copies is None:
            raise ValueError("n_copies is required with a named example")
        if explicit and (self.u is None or self.v is None):
            raise ValueError("both u and v matrices are required")
        return self

    def to_pair(self) -> UnitaryPair:
        if self.example is not None:
            assert self.n_copies is not None
            return example_pair(self.example, self.n_copies)
        assert self.u is not None and self.v is not None
        return UnitaryPair(u=_to_ndarray(self.u), v=_to_ndarray(self.v))


class TheoryResponse(BaseModel):
    theta: float
    nu: float
    diamond_norm: float
    p_success_bound: float
    min_copies: int | None
    perfect_single_use: bool


class BuildRequest(BaseModel):
    example: str = Field(..., description=f"one of {EXAMPLES}")
    n_copies: int = Field(..., ge=1)
    width: int = Field(..., ge=1)
    depth: int = Field(..., ge=1)
    primitive: str = Field("cnot", description=f"one of {PRIMITIVES}")
    measurement: str | None = Field(
        None, description=f"one of {MEASUREMENTS}; default depends on the example"
    )
    hypothesis: int = Field(0, ge=0, le=1)
    lam_phase: float = Field(
        0.0, description="phase (radians) of the free unit scalar, example1 only"
    )

    def to_spec(self) -> SchemeSpec:
        return SchemeSpec(
            example=self.example,
            n_copies=self.n_copies,
            width=self.width,
            depth=self.depth,
            primitive=self.primitive,
            measurement=self.measurement,
            lam=cmath.exp(1j * self.lam_phase),
        )


class BuildResponse(BaseModel):
    qasm: str
    n_qubits: int
    n_gates_1q: int
    n_gates_2q: int
    measurement: str
    rule: str
    reference_outcomes: list[str] | None
    theoretical_bound: float


class ExperimentRequest(BaseModel):
    example: str
    n_copies: int = Field(..., ge=1)
    shots: int = Field(10_000, ge=1)
    seed: int = Field(0, ge=0)
    noise: NoiseParams = NoiseParams()
    primitive: str = "cnot"
    measurement: str | None = None
    factorizations: list[tuple[int, int]] | None = Field(
        None, description="(width, depth) pairs; default: every width*depth == n_copies"
    )

    def to_config(self) -> ExperimentConfig:
        facts = None
        if self.factorizations is not None:
            facts = tuple((int(w), int(d)) for w, d in self.factorizations)
        return ExperimentConfig(
            example=self.example,
            n_copies=self.n_copies,
            shots=self.shots,
            seed=self.seed,
            noise=self.noise.to_model(),
            primitive=self.primitive,
            measurement=self.measurement,
            factorizations=facts,
        )


class ResultRowModel(BaseModel):
    w: int
    d: int
    measurement: str
    p_succ_raw: float
    p_succ_swapped: float
    ties: int
    theoretical_bound: float
    shots: int
    seed: int
    wall_time_s: float


class ExperimentResponse(BaseModel):
    example: str
    n_copies: int
    rows: list[ResultRowModel]


class SuboptimalRequest(BaseModel):
    n_copies: int = Field(..., ge=1)
    width: int = Field(..., ge=1)
    depth: int = Field(..., ge=1)
    shots: int = Field(10_000, ge=1)
    seed: int = Field(0, ge=0)
    noise: NoiseParams = NoiseParams()
    primitive: str = "cnot"


class SuboptimalResponse(BaseModel):
    n_copies: int
    width: int
    depth: int
    p_succ: float
    ties: int
    p_single_noiseless: float
    majority_closed_form: float
    shots: int
    seed: int
    wall_time_s: float


# --------------------------------------------------------------------------
# app
# --------------------------------------------------------------------------


def create_app() -> FastAPI:
    app = FastAPI(title="qudisc", version=__version__)

    @app.exception_handler(ConfigurationError)
    async def _config_error(request: Request, exc: ConfigurationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(QudiscError)
    async def _engine_error(request: Request, exc: QudiscError) -> JSONResponse:
        return JSONResponse(
            status_code=500,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    async def health() -> dict[str, str]:
        return {"status": "ok", "version": __version__}

    @app.post("/theory/report", response_model=TheoryResponse)
    async def theory_report(req: TheoryRequest) -> TheoryResponse:
        try:
            pair = req.to_pair()
        except (ValueError, QudiscError) as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise InvalidSpecError(str(exc)) from exc
        report = discrimination_report(pair)
        return TheoryResponse(
            theta=report.theta,
            nu=report.nu,
            diamond_norm=report.diamond_norm,
            p_success_bound=report.p_success_bound,
            min_copies=report.min_copies,
            perfect_single_use=report.perfect_single_use,
        )

    @app.post("/circuits/build", response_model=BuildResponse)
    async def circuits_build(req: BuildRequest) -> BuildResponse:
        plan = assemble_plan(req.to_spec())
        circ = plan.circuit_h0 if req.hypothesis == 0 else plan.circuit_h1
        n1 = sum(1 for g in circ.gates if len(g.qubits) == 1)
        n2 = len(circ.gates) - n1
        refs = None
        if plan.reference_outcomes is not None:
            refs = list(plan.reference_outcomes)
        return BuildResponse(
            qasm=emit_qasm(circ),
            n_qubits=circ.n_qubits,
            n_gates_1q=n1,
            n_gates_2q=n2,
            measurement=plan.spec.measurement,
            rule=type(plan.rule).__name__,
            reference_outcomes=refs,
            theoretical_bound=plan.theoretical_bound,
        )

    @app.post("/experiments/run", response_model=ExperimentResponse)
    async def experiments_run(req: ExperimentRequest) -> ExperimentResponse:
        config = req.to_config()
        rows = run_experiment(config)
        return ExperimentResponse(
            example=config.example,
            n_copies=config.n_copies,
            rows=[ResultRowModel(**_row_dict(r)) for r in rows],
        )

    @app.post("/experiments/suboptimal", response_model=SuboptimalResponse)
    async def experiments_suboptimal(req: SuboptimalRequest) -> SuboptimalResponse:
        result = run_suboptimal(
            n_copies=req.n_copies,
            width=req.width,
            depth=req.depth,
            shots=req.shots,
            noise=req.noise.to_model(),
            seed=req.seed,
            primitive=req.primitive,
        )
        return SuboptimalResponse(**_row_dict(result))

    return app


def _row_dict(row: Any) -> dict[str, Any]:
    import dataclasses

    return dataclasses.asdict(row)


app = create_app()
