"""
Despacho por formalismo: enumeración acotada, pertenencia y muestras de relación
para cualquier gramática, sistema o autómata del paquete.
"""

from typing import Any, Optional, Sequence, Tuple

from core.config import settings
from core.errors import UnknownFormalism
from core.logger import get_logger
from core.words import RelationSample, Symbol, sample_from_words
from models.RelkitModels import EnumerationResult, Formalism, GrammarKind, Viewpoint
from services.automata_service import (
    CounterAutomaton, Nfa, PushdownAutomaton, Transducer,
    nfa_enumerate, nfa_run, oca_enumerate, oca_run, pda_enumerate, pda_run,
    transducer_enumerate, transducer_run,
)
from services.grammar_service import ContextFreeGrammar, LeftRegularGrammar, cfg_enumerate, cfg_member
from services.indexed_service import IndexedGrammar, PartitionedIndexedGrammar, ig_enumerate, ig_member
from services.lsystem_service import EDT0LWitness, ET0LSystem, etol_enumerate, etol_member

logger = get_logger(__name__)


def formalism_of(obj: Any) -> Formalism:
    obj = unwrap(obj)
    if isinstance(obj, LeftRegularGrammar):
        return Formalism.LEFT_REGULAR
    if isinstance(obj, ContextFreeGrammar):
        return Formalism.CFG
    if isinstance(obj, IndexedGrammar):
        return Formalism.LIG if obj.kind == GrammarKind.LINEAR_INDEXED else Formalism.INDEXED
    if isinstance(obj, ET0LSystem):
        return Formalism.ET0L
    if isinstance(obj, Nfa):
        return Formalism.NFA
    if isinstance(obj, CounterAutomaton):
        return Formalism.COUNTER
    if isinstance(obj, Transducer):
        return Formalism.TRANSDUCER
    if isinstance(obj, PushdownAutomaton):
        return Formalism.PDA
    raise UnknownFormalism(f"no formalism for {type(obj).__name__}")


def unwrap(obj: Any) -> Any:
    """Los testigos de validación se enumeran a través del objeto que envuelven"""
    if isinstance(obj, PartitionedIndexedGrammar):
        return obj.grammar
    if isinstance(obj, EDT0LWitness):
        return obj.system
    return obj


def summarize(obj: Any) -> str:
    """Resumen de una línea para reportes"""
    if isinstance(obj, RelationSample):
        return f"sample: {obj.size} pairs up to bound {obj.bound}"
    if isinstance(obj, (set, frozenset, list)):
        return f"word set: {len(obj)} words"
    if isinstance(obj, PartitionedIndexedGrammar):
        return f"partitioned {summarize(obj.grammar)}"
    if isinstance(obj, EDT0LWitness):
        return "edt0l " + summarize(obj.system)
    if isinstance(obj, ContextFreeGrammar):
        return f"{formalism_of(obj).value}: {len(obj.nonterminals)} nonterminals, {len(obj.productions)} productions"
    if isinstance(obj, IndexedGrammar):
        return (
            f"{formalism_of(obj).value}: {len(obj.nonterminals)} nonterminals, "
            f"{len(obj.flags)} flags, {len(obj.productions)} productions"
        )
    if isinstance(obj, ET0LSystem):
        return f"etol: {len(obj.nonterminals)} nonterminals, {len(obj.tables)} tables"
    if isinstance(obj, (Nfa, CounterAutomaton, Transducer, PushdownAutomaton)):
        return f"{formalism_of(obj).value}: {len(obj.states)} states, {len(obj.transitions)} transitions"
    return type(obj).__name__


def enumerate_words(
    obj: Any, bound: int, viewpoint: Viewpoint = Viewpoint.PLAIN, steps: Optional[int] = None
) -> EnumerationResult:
    """Palabras del lenguaje de obj dentro de la cota del punto de vista"""
    steps = settings.DEFAULT_STEPS if steps is None else steps
    viewpoint = Viewpoint(viewpoint)
    obj = unwrap(obj)
    if isinstance(obj, ContextFreeGrammar):
        words = cfg_enumerate(obj, bound, viewpoint)
        return EnumerationResult(words=words, bound=bound, viewpoint=viewpoint)
    if isinstance(obj, IndexedGrammar):
        return ig_enumerate(obj, bound, steps, viewpoint)
    if isinstance(obj, ET0LSystem):
        return etol_enumerate(obj, bound, steps, viewpoint)
    if isinstance(obj, Nfa):
        return EnumerationResult(words=nfa_enumerate(obj, bound, viewpoint), bound=bound, viewpoint=viewpoint)
    if isinstance(obj, CounterAutomaton):
        words = oca_enumerate(obj, bound, viewpoint=viewpoint)
        return EnumerationResult(words=words, bound=bound, viewpoint=viewpoint)
    if isinstance(obj, PushdownAutomaton):
        return EnumerationResult(words=pda_enumerate(obj, bound, viewpoint), bound=bound, viewpoint=viewpoint)
    raise UnknownFormalism(f"cannot enumerate words of {type(obj).__name__}")


def relation_sample(
    obj: Any, viewpoint: Viewpoint, bound: int, steps: Optional[int] = None
) -> Tuple[RelationSample, bool]:
    """Muestra de la relación codificada por obj y si la enumeración fue completa"""
    if isinstance(obj, Transducer):
        return transducer_enumerate(obj, bound), True
    result = enumerate_words(obj, bound, viewpoint, steps)
    sample = sample_from_words(result.words, viewpoint, bound)
    logger.debug(
        "relation_sample: %s %s cota=%d -> %d pares",
        formalism_of(obj).value, Viewpoint(viewpoint).value, bound, sample.size,
    )
    return sample, result.complete


def member(obj: Any, word: Sequence[Symbol], steps: Optional[int] = None) -> bool:
    steps = settings.DEFAULT_STEPS if steps is None else steps
    obj = unwrap(obj)
    if isinstance(obj, ContextFreeGrammar):
        return cfg_member(obj, word)
    if isinstance(obj, IndexedGrammar):
        return ig_member(obj, word, steps)
    if isinstance(obj, ET0LSystem):
        return etol_member(obj, word, steps)
    if isinstance(obj, Nfa):
        return nfa_run(obj, word)
    if isinstance(obj, CounterAutomaton):
        return oca_run(obj, word)
    if isinstance(obj, PushdownAutomaton):
        return pda_run(obj, word)
    raise UnknownFormalism(f"membership is not defined for {type(obj).__name__}")


def pair_member(obj: Transducer, u: Sequence[str], v: Sequence[str]) -> bool:
    return transducer_run(obj, u, v)
