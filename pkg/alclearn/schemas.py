"""Pydantic models for the documents alclearn reads and writes."""

from __future__ import annotations

import math

from pydantic import BaseModel, Field, field_validator, model_validator

from alclearn.concepts import parse_concept
from alclearn.errors import AlcLearnError
from alclearn.types import Method

CHECKPOINT_SCHEMA = "alclearn.qnet/1"

EVAL_CSV_HEADER = ("lp_id", "method", "concept", "length", "f1", "accuracy", "runtime_s", "expressions_tested")


class LearningProblemRecord(BaseModel):
    """One learning problem: example individuals and, for generated problems, the target."""

    lp_id: str | None = None
    positives: list[str] = Field(..., min_length=1)
    negatives: list[str] = Field(..., min_length=1)
    target: str | None = Field(default=None, description="Target concept in the concept syntax.")

    @field_validator("target")
    @classmethod
    def target_parses(cls, value: str | None) -> str | None:
        """Reject targets that are not valid concept text."""
        if value is not None:
            try:
                parse_concept(value)
            except AlcLearnError as exc:
                raise ValueError(str(exc)) from exc
        return value

    @model_validator(mode="after")
    def examples_disjoint(self) -> "LearningProblemRecord":
        """Ensure no individual is both positive and negative."""
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            raise ValueError(f"individuals are both positive and negative: {sorted(overlap)}")
        if len(set(self.positives)) != len(self.positives) or len(set(self.negatives)) != len(self.negatives):
            raise ValueError("example lists must not repeat individuals")
        return self


class LearningProblemFile(BaseModel):
    """A list of learning problems."""

    problems: list[LearningProblemRecord]


class EvalRowModel(BaseModel):
    """One evaluation row, as written to CSV and printed by ``learn``."""

    lp_id: str
    method: Method
    concept: str
    length: int = Field(..., ge=1)
    f1: float = Field(..., ge=0.0, le=1.0)
    accuracy: float = Field(..., ge=0.0, le=1.0)
    runtime_s: float = Field(..., ge=0.0)
    expressions_tested: int = Field(..., ge=1)


class TensorRecord(BaseModel):
    """A named tensor in row-major order."""

    name: str
    shape: list[int]
    values: list[float]

    @model_validator(mode="after")
    def size_matches_shape(self) -> "TensorRecord":
        """Ensure the value count equals the product of the shape."""
        if math.prod(self.shape) != len(self.values):
            raise ValueError(f"tensor {self.name}: shape {self.shape} needs {math.prod(self.shape)} values")
        if not all(math.isfinite(value) for value in self.values):
            raise ValueError(f"tensor {self.name}: values must be finite")
        return self


class CheckpointDocument(BaseModel):
    """Versioned Q-network checkpoint."""

    schema_id: str = Field(default=CHECKPOINT_SCHEMA, alias="schema")
    d: int = Field(..., ge=2)
    hidden: int = Field(..., ge=1)
    tensors: list[TensorRecord]

    model_config = {"populate_by_name": True}

    @field_validator("schema_id")
    @classmethod
    def known_schema(cls, value: str) -> str:
        """Only the current schema version is readable."""
        if value != CHECKPOINT_SCHEMA:
            raise ValueError(f"unsupported checkpoint schema {value!r}")
        return value
