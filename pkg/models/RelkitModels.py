# relkit models - enums y reportes (pydantic)
from pydantic import BaseModel, ConfigDict, Field
from typing import Optional, List, Any, FrozenSet, Tuple, Union
from enum import Enum

# ENUMS
class Formalism(str, Enum):
    LEFT_REGULAR = "rg"
    CFG = "cfg"
    LIG = "lig"
    INDEXED = "ig"
    ET0L = "etol"
    NFA = "nfa"
    COUNTER = "oca"
    TRANSDUCER = "fst"
    PDA = "pda"

class Viewpoint(str, Enum):
    PLAIN = "plain"
    TWO_TAPE = "two-tape"
    UNFOLDED = "unfolded"

class OutputFormat(str, Enum):
    TEXT = "text"
    STRUCTURED = "structured"

class Verdict(str, Enum):
    VERIFIED = "verified"
    MISMATCH = "mismatch"
    UNVERIFIED = "unverified"

class GrammarKind(str, Enum):
    INDEXED = "indexed"
    LINEAR_INDEXED = "linear-indexed"

class CounterMode(str, Enum):
    BLIND = "blind"
    TESTED = "tested"

class Guard(str, Enum):
    NONE = "none"
    ZERO = "zero"

class PdaAcceptance(str, Enum):
    EMPTY_STACK = "empty-stack"
    FINAL_STATE = "final-state"

# Tipos de palabra tal como viajan en los reportes
WordModel = Tuple[str, ...]
PairModel = Tuple[WordModel, WordModel]

# REPORTES

class SampleComparison(BaseModel):
    """Resultado de comparar dos muestras de relación"""
    equal: bool
    bound: int
    first_size: int
    second_size: int
    only_in_first: List[PairModel] = Field(default_factory=list)
    only_in_second: List[PairModel] = Field(default_factory=list)

class WordSetComparison(BaseModel):
    """Resultado de comparar dos conjuntos de palabras (testigos ya formateados)"""
    equal: bool
    bound: int
    first_size: int
    second_size: int
    only_in_first: List[str] = Field(default_factory=list)
    only_in_second: List[str] = Field(default_factory=list)

class EnumerationResult(BaseModel):
    """Palabras encontradas por un enumerador acotado"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    words: FrozenSet[Tuple[Any, ...]]
    bound: int
    viewpoint: Viewpoint = Viewpoint.PLAIN
    complete: bool = True
    explored: int = 0

class KindReport(BaseModel):
    """Clasificación de una gramática indexada"""
    kind: GrammarKind
    total_productions: int
    linear_productions: int
    shared_stack: List[str] = Field(default_factory=list)

class ConstructionReport(BaseModel):
    """Reporte de una construcción con su verificación acotada"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    construction: str
    input_summary: str
    output_summary: str
    checked_bound: int
    verdict: Verdict
    comparison: Optional[Union[SampleComparison, WordSetComparison]] = None
    complete: bool = True
    notes: List[str] = Field(default_factory=list)
    output: Any = Field(default=None, exclude=True)

    @property
    def verified(self) -> bool:
        return self.verdict == Verdict.VERIFIED

class RepresentationCheck(BaseModel):
    """Comparación de una representación del zoo contra su decisor"""
    label: str
    formalism: Formalism
    viewpoint: Viewpoint
    complete: bool
    comparison: SampleComparison

class ZooCheckReport(BaseModel):
    name: str
    bound: int
    sample_size: int
    verified: bool
    representations: List[RepresentationCheck] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

class ZooEntrySummary(BaseModel):
    name: str
    alphabet: List[str]
    locus: str
    check_bound: int
    representations: List[str] = Field(default_factory=list)

class CommandOptions(BaseModel):
    """Flags comunes del CLI"""
    bound: int = Field(ge=0)
    steps: int = Field(ge=0)
    viewpoint: Viewpoint = Viewpoint.TWO_TAPE
    output_format: OutputFormat = OutputFormat.TEXT
    verify: bool = True

# EXPORTACIONES (formato estructurado)

class SampleExport(BaseModel):
    """Muestra de relación; los pares van ordenados por longitud y luego lexicográficamente"""
    bound: int
    size: int
    pairs: List[PairModel] = Field(default_factory=list)

class WordListExport(BaseModel):
    bound: int
    viewpoint: Viewpoint
    complete: bool
    words: List[str] = Field(default_factory=list)

class MembershipResult(BaseModel):
    word: str
    member: bool

class ValidationReport(BaseModel):
    """Resumen de `validate`"""
    source: str
    formalism: Formalism
    summary: str
    kind: Optional[KindReport] = None
    deterministic: Optional[bool] = None
    partition_rows: List[int] = Field(default_factory=list)
