from enum import Enum, IntEnum
from typing import Any

from pydantic import BaseModel, Field, RootModel

# Wire form of a level-1 node: a list of naturals. -1 travels as null.
NodeJson = list[int]


class OutputFormat(str, Enum):
    """Output formats of the command line, there are."""
    JSON = "json"
    LISTING = "listing"


class Verb(str, Enum):
    """Command line verbs, there are."""
    VALIDATE = "validate"
    DESC = "desc"
    TENSOR = "tensor"
    OTYPE = "otype"
    ANALYZE = "analyze"
    FACTOR = "factor"
    IOTA = "iota"
    SHIFT = "shift"
    FIXTURES = "fixtures"


class ExitCode(IntEnum):
    """Process exit codes, these are."""
    OK = 0
    VIOLATIONS = 1
    COMPUTATION_FAILED = 2
    PARSE_ERROR = 3


class Violation(BaseModel):
    """A broken tree invariant, named by node and rule, this is."""
    node: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.node}: {self.rule}: {self.message}"


class Level1Json(RootModel[list[NodeJson]]):
    """Canonical JSON of a level-1 tree: its nodes, this is."""


class Level2EntryJson(BaseModel):
    """One entry q -> (tree, node) of a level <=2 tree, this is."""
    q: list[NodeJson]
    tree: list[NodeJson] = Field(default_factory=list)
    node: NodeJson | None = None


class Level2Json(BaseModel):
    """Canonical JSON of a level <=2 tree, this is."""
    t1: list[NodeJson] = Field(default_factory=list)
    t2: list[Level2EntryJson] = Field(default_factory=list)


class DeltaJson(BaseModel):
    """A delta (d, q, P); q is a level-1 node for d=1, a level-2 node for d=2, null for d=0."""
    d: int = Field(ge=0, le=2)
    q: Any = None
    P: list[NodeJson] = Field(default_factory=list)


class Level3EntryJson(BaseModel):
    """One entry r -> (Q_r, delta_r) of a level-3 tree, this is."""
    r: list[NodeJson]
    tree: Level2Json
    delta: DeltaJson


class Level3Json(BaseModel):
    """Canonical JSON of a level-3 tree, this is."""
    entries: list[Level3EntryJson] = Field(default_factory=list)
