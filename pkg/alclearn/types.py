"""Shared typing helpers."""

from typing import Literal

Method = Literal["drill", "celoe", "ocel", "random"]
QualityMetric = Literal["f_measure", "accuracy_simple", "accuracy_celoe"]
StopReason = Literal["goal", "runtime", "max_expressions", "exhausted"]

METHODS: tuple[Method, ...] = ("drill", "celoe", "ocel", "random")
QUALITY_METRICS: tuple[QualityMetric, ...] = ("f_measure", "accuracy_simple", "accuracy_celoe")
