"""Text checkpoints of Q-network parameters."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from pydantic import ValidationError

from alclearn.embeddings import STATE_ROWS
from alclearn.errors import CheckpointError, InputFileError, ShapeMismatchError
from alclearn.logging_utils import get_logger
from alclearn.models.network import CHANNELS, KERNEL, QNetworkParams
from alclearn.schemas import CheckpointDocument, TensorRecord

logger = get_logger(__name__)


def expected_shapes(d: int, hidden: int) -> dict[str, tuple[int, ...]]:
    return {
        "omega": (CHANNELS, 1, KERNEL, KERNEL),
        "W": (CHANNELS * STATE_ROWS * d, hidden),
        "b1": (hidden,),
        "H": (hidden, 1),
        "b2": (1,),
    }


def to_document(params: QNetworkParams) -> CheckpointDocument:
    return CheckpointDocument(
        d=params.d,
        hidden=params.hidden,
        tensors=[
            TensorRecord(name=name, shape=list(value.shape), values=value.ravel(order="C").tolist())
            for name, value in params.tensors().items()
        ],
    )


def from_document(document: CheckpointDocument) -> QNetworkParams:
    shapes = expected_shapes(document.d, document.hidden)
    arrays: dict[str, np.ndarray] = {}
    for record in document.tensors:
        if record.name not in shapes:
            raise CheckpointError(f"unexpected tensor {record.name!r}")
        if tuple(record.shape) != shapes[record.name]:
            raise CheckpointError(
                f"tensor {record.name} has shape {tuple(record.shape)}, expected {shapes[record.name]}"
            )
        arrays[record.name] = np.array(record.values, dtype=np.float64).reshape(record.shape)
    missing = sorted(set(shapes) - set(arrays))
    if missing:
        raise CheckpointError(f"checkpoint lacks tensors {missing}")
    try:
        return QNetworkParams(**arrays)
    except ShapeMismatchError as exc:
        raise CheckpointError(str(exc)) from exc


def save_checkpoint(params: QNetworkParams, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_document(params).model_dump_json(by_alias=True), encoding="utf-8")
    logger.info("Checkpoint written | path=%s d=%d hidden=%d", path, params.d, params.hidden)


def load_checkpoint(path: str | Path, *, d: int | None = None, hidden: int | None = None) -> QNetworkParams:
    """Read a checkpoint, optionally requiring a given state dimension and hidden width."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read checkpoint {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise CheckpointError(f"{path}: not UTF-8 text: {exc}") from exc
    try:
        document = CheckpointDocument.model_validate_json(text)
    except ValidationError as exc:
        raise CheckpointError(f"{path}: {exc}") from exc
    if d is not None and document.d != d:
        raise CheckpointError(f"{path}: checkpoint dimension {document.d} does not match embeddings ({d})")
    if hidden is not None and document.hidden != hidden:
        raise CheckpointError(f"{path}: checkpoint hidden width {document.hidden} does not match {hidden}")
    return from_document(document)
