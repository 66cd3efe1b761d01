"""
Job files for the bqm command line

A job is a JSON document validated against JobConfig. Complex numbers are
written as {"re": float, "im": float} (a bare number is accepted as a real),
matrices as row-major arrays of arrays. Unknown fields are rejected.
"""

import hashlib
import json
import math
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError
from .models import CMatrix, CVector, PSpace, QubitScenario, SpectralDecomposition, StateFunctional
from .scenarios import build_scenario
from .spectral import decompose
from .states import mixed_state, point_state


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class ComplexNumber(_Strict):
    re: float
    im: float = 0.0

    def value(self) -> complex:
        return complex(self.re, self.im)


Scalar = Union[ComplexNumber, float]


def _scalar(value: Scalar) -> complex:
    return value.value() if isinstance(value, ComplexNumber) else complex(value)


class SpaceConfig(_Strict):
    dim: int = Field(ge=1)
    p: float = Field(ge=1.0)


class ObliqueConfig(_Strict):
    x: List[Scalar] = Field(min_length=2, max_length=2)
    y: List[Scalar] = Field(min_length=2, max_length=2)
    lambda1: float
    lambda2: float


class OperatorConfig(_Strict):
    """Exactly one of an inline matrix or a scenario name"""

    matrix: Optional[List[List[Scalar]]] = None
    scenario: Optional[Literal["pauli1", "pauli2", "pauli3", "oblique"]] = None
    oblique: Optional[ObliqueConfig] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.matrix is None) == (self.scenario is None):
            raise ValueError("operator needs exactly one of 'matrix' or 'scenario'")
        if self.oblique is not None and self.scenario != "oblique":
            raise ValueError("'oblique' parameters only apply to the oblique scenario")
        return self


class MixtureTerm(_Strict):
    weight: float = Field(ge=0.0)
    vector: List[Scalar]


class SweepConfig(_Strict):
    """
    Grid over unit qubit states u = cos(theta), v = sin(theta) e^(i phi),
    renormalized in the p-norm. theta includes both ends, phi excludes the
    upper end (it is periodic).
    """

    theta_steps: int = Field(ge=1)
    phi_steps: int = Field(ge=1)
    theta_min: float = 0.0
    theta_max: float = math.pi / 2
    phi_min: float = 0.0
    phi_max: float = 2 * math.pi

    @model_validator(mode="after")
    def _ordered(self):
        if self.theta_max < self.theta_min:
            raise ValueError("sweep needs theta_min <= theta_max")
        if self.phi_max <= self.phi_min:
            raise ValueError("sweep needs phi_min < phi_max")
        return self

    def grid(self) -> List[Tuple[int, float, float]]:
        thetas = np.linspace(self.theta_min, self.theta_max, self.theta_steps) if self.theta_steps > 1 else np.array([self.theta_min])
        phis = self.phi_min + (self.phi_max - self.phi_min) * np.arange(self.phi_steps) / self.phi_steps
        return [
            (i * self.phi_steps + j, float(theta), float(phi))
            for i, theta in enumerate(thetas)
            for j, phi in enumerate(phis)
        ]


class StateConfig(_Strict):
    vector: Optional[List[Scalar]] = None
    mixture: Optional[List[MixtureTerm]] = Field(default=None, min_length=1)
    sweep: Optional[SweepConfig] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [name for name in ("vector", "mixture", "sweep") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError("state needs exactly one of 'vector', 'mixture' or 'sweep'")
        return self


class TimeGrid(_Strict):
    """Either explicit times or start/stop/points (endpoints included)"""

    times: Optional[List[float]] = Field(default=None, min_length=1)
    start: float = 0.0
    stop: Optional[float] = None
    points: int = Field(default=2, ge=1)

    @model_validator(mode="after")
    def _one_form(self):
        if (self.times is None) == (self.stop is None):
            raise ValueError("time grid needs exactly one of 'times' or 'stop'")
        return self

    def values(self) -> List[float]:
        if self.times is not None:
            return [float(t) for t in self.times]
        if self.points == 1:
            return [self.start]
        return [float(t) for t in np.linspace(self.start, self.stop, self.points)]


class Tolerances(_Strict):
    tol: Optional[float] = Field(default=None, gt=0)
    group_tol: Optional[float] = Field(default=None, gt=0)
    cond_limit: Optional[float] = Field(default=None, gt=1)


class JobConfig(_Strict):
    space: SpaceConfig
    operator: Optional[OperatorConfig] = None
    state: Optional[StateConfig] = None
    event: Optional[List[List[Scalar]]] = None
    times: Optional[TimeGrid] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    shots: int = Field(default=0, ge=0)
    probabilities: bool = False
    ode_steps: Optional[int] = Field(default=None, ge=1)
    workers: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None
    tolerances: Optional[Tolerances] = None

    @model_validator(mode="after")
    def _has_subject(self):
        if self.operator is None and self.event is None:
            raise ValueError("job needs an 'operator' or an 'event'")
        return self

    def build_space(self) -> PSpace:
        return PSpace(dim=self.space.dim, p=self.space.p)


def load_job(path: Union[str, Path]) -> Tuple[JobConfig, str]:
    """
    Read and validate a job file.

    Returns:
        (JobConfig, config hash) where the hash is the first 16 hex digits of
        the SHA-256 of the file bytes

    Raises:
        ConfigError: unreadable file, malformed JSON or schema violation
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"malformed JSON in {path}: {e}") from e
    try:
        job = JobConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid config {path}: {e}") from e
    return job, hashlib.sha256(raw).hexdigest()[:16]


def parse_vector(space: PSpace, values: List[Scalar]) -> CVector:
    return space.vector([_scalar(v) for v in values])


def parse_matrix(space: PSpace, rows: List[List[Scalar]]) -> CMatrix:
    if any(len(row) != len(rows) for row in rows):
        raise ConfigError("matrix rows must all have the same length as the row count")
    return space.matrix([[_scalar(v) for v in row] for row in rows])


def resolve_operator(job: JobConfig, space: PSpace) -> Tuple[CMatrix, SpectralDecomposition, Optional[QubitScenario]]:
    """Matrix, decomposition and (for named scenarios) the scenario of a job"""
    op = job.operator
    if op is None:
        raise ConfigError("this command needs an 'operator'")
    if op.scenario is not None:
        params = {}
        if op.oblique is not None:
            params = {
                "x": [_scalar(v) for v in op.oblique.x],
                "y": [_scalar(v) for v in op.oblique.y],
                "lambda1": op.oblique.lambda1,
                "lambda2": op.oblique.lambda2,
            }
        scenario = build_scenario(op.scenario, space, **params)
        return scenario.matrix, scenario.hamiltonian, scenario
    matrix = parse_matrix(space, op.matrix)
    return matrix, decompose(matrix), None


def resolve_state(job: JobConfig, space: PSpace) -> StateFunctional:
    """Point or mixed state of a job (sweeps are handled by the scan command)"""
    if job.state is None or job.state.sweep is not None:
        raise ConfigError("this command needs a 'state' with a 'vector' or a 'mixture'")
    if job.state.vector is not None:
        return point_state(space, parse_vector(space, job.state.vector))
    try:
        return mixed_state(space, [(t.weight, parse_vector(space, t.vector)) for t in job.state.mixture])
    except ValueError as e:
        raise ConfigError(str(e)) from e
