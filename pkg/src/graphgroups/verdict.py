"""Three-valued verdicts with reason traces and attached witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


# Group constructors a verdict can be about
GRAPH_PRODUCT = "graph-product"
COXETER = "coxeter"
AUT_GRAPH_PRODUCT = "aut-graph-product"
AUT_COXETER = "aut-coxeter"
AUT_FREE_PRODUCT = "aut-free-product"

# Properties
HYPERBOLIC = "hyperbolic"
VIRTUALLY_FREE = "virtually-free"
OUT_FINITE = "out-finite"
FIXED_POINT_SIMPLICIAL = "fa"
FIXED_POINT_METRIC = "fr"


@dataclass(frozen=True)
class TraceStep:
    """One evaluated criterion: what was checked, which result justifies it,
    and what came out."""

    criterion: str
    anchor: str
    outcome: str


@dataclass(frozen=True)
class Verdict:
    answer: Answer
    constructor: str
    prop: str
    trace: tuple[TraceStep, ...]
    witnesses: tuple[object, ...] = field(default=())

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES

    @property
    def no(self) -> bool:
        return self.answer is Answer.NO

    @property
    def unknown(self) -> bool:
        return self.answer is Answer.UNKNOWN


@dataclass(frozen=True)
class Assumptions:
    """Externally asserted facts the theorems may condition on.

    `out_w_finite` records a user-supplied claim about the outer automorphism
    group of the Coxeter group; no general criterion for it is implemented.
    """

    out_w_finite: Optional[bool] = None
