"""
Sistemas ET0L / EDT0L: tablas, aplicación simultánea y generación acotada.
"""

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Sequence, Set, Tuple

from core.errors import MalformedProduction, NotDeterministic
from core.logger import get_logger
from core.words import EPS_TOKEN, SEPARATOR, LengthBudget, Symbol, symbol_key
from models.RelkitModels import EnumerationResult, Viewpoint

logger = get_logger(__name__)

Form = Tuple[Symbol, ...]


@dataclass(frozen=True)
class Table:
    """Reglas de una tabla; los símbolos sin regla se reescriben por sí mismos"""
    name: str
    rules: Tuple[Tuple[Symbol, Tuple[Form, ...]], ...]
    implicit: FrozenSet[Symbol] = frozenset()

    @functools.cached_property
    def mapping(self) -> Dict[Symbol, Tuple[Form, ...]]:
        return dict(self.rules)

    def replacements(self, symbol: Symbol) -> Tuple[Form, ...]:
        return self.mapping.get(symbol, ((symbol,),))

    @property
    def is_deterministic(self) -> bool:
        return all(len(options) == 1 for _, options in self.rules)

    def __str__(self) -> str:
        parts = []
        for symbol, options in self.rules:
            if symbol in self.implicit:
                continue
            bodies = " | ".join("".join(str(s) for s in o) if o else EPS_TOKEN for o in options)
            parts.append(f"{symbol} -> {bodies}")
        return f"table {self.name}: " + " ; ".join(parts)


def make_table(
    name: str,
    rules: Mapping[Symbol, Iterable[Sequence[Symbol]]],
    nonterminals: Iterable[Symbol] = (),
    fill_identity: bool = False,
) -> Table:
    """Con fill_identity, los no terminales omitidos reciben la identidad (marcada)"""
    table: Dict[Symbol, Tuple[Form, ...]] = {}
    for symbol, options in rules.items():
        opts = tuple(dict.fromkeys(tuple(o) for o in options))
        if not opts:
            raise MalformedProduction(symbol, f"table {name!r} gives it no replacement")
        table[symbol] = opts
    implicit: Set[Symbol] = set()
    if fill_identity:
        for a in nonterminals:
            if a not in table:
                table[a] = ((a,),)
                implicit.add(a)
    ordered = tuple(sorted(table.items(), key=lambda kv: symbol_key(kv[0])))
    return Table(name, ordered, frozenset(implicit))


@dataclass(frozen=True)
class ET0LSystem:
    nonterminals: FrozenSet[Symbol]
    terminals: FrozenSet[Symbol]
    axiom: Form
    tables: Tuple[Table, ...]

    def __post_init__(self):
        if not self.tables:
            raise MalformedProduction(self.axiom, "an ET0L system needs at least one table")
        for s in self.axiom:
            if s not in self.nonterminals and s not in self.terminals:
                raise MalformedProduction(self.axiom, f"undeclared symbol {s!r} in axiom")
        for t in self.tables:
            for symbol, options in t.rules:
                if symbol in self.terminals and options != ((symbol,),):
                    raise MalformedProduction(symbol, f"table {t.name!r} rewrites a terminal")
                if symbol not in self.nonterminals and symbol not in self.terminals:
                    raise MalformedProduction(symbol, f"table {t.name!r} rewrites an undeclared symbol")
                for o in options:
                    for s in o:
                        if s not in self.nonterminals and s not in self.terminals:
                            raise MalformedProduction(symbol, f"undeclared symbol {s!r}")
            missing = [a for a in self.nonterminals if a not in t.mapping]
            if missing:
                raise MalformedProduction(
                    sorted(missing, key=symbol_key)[0], f"table {t.name!r} has no production for it"
                )

    def is_nonterminal(self, symbol: Symbol) -> bool:
        return symbol in self.nonterminals

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)


@dataclass(frozen=True)
class EDT0LWitness:
    system: ET0LSystem
    tag: str = field(default="edt0l")


# ================================
# APLICACIÓN DE TABLAS
# ================================

def apply_table(form: Sequence[Symbol], table: Table) -> FrozenSet[Form]:
    """Todos los sucesores por reescritura simultánea"""
    choices = [table.replacements(s) for s in form]
    out: Set[Form] = set()
    for pick in itertools.product(*choices):
        out.add(tuple(s for piece in pick for s in piece))
    return frozenset(out)


def apply_tables(sys: ET0LSystem, names: Sequence[str]) -> FrozenSet[Form]:
    """Aplica una secuencia de tablas por nombre a partir del axioma"""
    forms: FrozenSet[Form] = frozenset({sys.axiom})
    for name in names:
        t = sys.table(name)
        forms = frozenset(succ for f in forms for succ in apply_table(f, t))
    return forms


def erasable_symbols(sys: ET0LSystem) -> Set[Symbol]:
    """Sobreaproximación: algún camino de tablas lleva el símbolo a ε"""
    erasable: Set[Symbol] = set()
    changed = True
    while changed:
        changed = False
        for a in sys.nonterminals:
            if a in erasable:
                continue
            for t in sys.tables:
                if any(all(s in erasable for s in o) for o in t.replacements(a)):
                    erasable.add(a)
                    changed = True
                    break
    return erasable


def etol_enumerate(
    sys: ET0LSystem,
    maxlen: int,
    max_apps: int,
    viewpoint: Viewpoint = Viewpoint.PLAIN,
) -> EnumerationResult:
    """Palabras terminales alcanzables con ≤ max_apps aplicaciones de tablas.

    Se poda una forma cuando sus símbolos no borrables ya exceden la cota.
    """
    budget = LengthBudget(viewpoint, maxlen)
    erasable = erasable_symbols(sys)

    def is_terminal(s: Symbol) -> bool:
        return s not in sys.nonterminals

    def weight(s: Symbol) -> int:
        return 0 if s in erasable else 1

    def admissible(form: Form) -> bool:
        if sum(weight(s) for s in form) > budget.capacity:
            return False
        if not budget.admits_form(form, is_terminal):
            return False
        if budget.viewpoint == Viewpoint.UNFOLDED and SEPARATOR in form:
            h = form.index(SEPARATOR)
            return sum(weight(s) for s in form[:h]) <= maxlen and sum(weight(s) for s in form[h + 1:]) <= maxlen
        return True

    frontier: List[Form] = [sys.axiom] if admissible(sys.axiom) else []
    seen: Set[Form] = set(frontier)
    words: Set[Form] = set()
    truncated = False
    explored = 0
    for apps in range(max_apps + 1):
        nxt: List[Form] = []
        for form in frontier:
            explored += 1
            if all(is_terminal(s) for s in form):
                if budget.admits(form):
                    words.add(form)
                continue
            if apps == max_apps:
                truncated = True
                continue
            for t in sys.tables:
                for succ in apply_table(form, t):
                    if succ in seen or not admissible(succ):
                        continue
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
        if not frontier:
            break

    logger.debug(
        "etol_enumerate: cota=%d aplicaciones=%d -> %d palabras, completo=%s",
        maxlen, max_apps, len(words), not truncated,
    )
    return EnumerationResult(
        words=frozenset(words),
        bound=maxlen,
        viewpoint=budget.viewpoint,
        complete=not truncated,
        explored=explored,
    )


def etol_member(sys: ET0LSystem, word: Sequence[Symbol], max_apps: int) -> bool:
    word = tuple(word)
    return word in etol_enumerate(sys, len(word), max_apps).words


def edt0l_validate(sys: ET0LSystem) -> EDT0LWitness:
    for t in sys.tables:
        for symbol, options in t.rules:
            if len(options) != 1:
                raise NotDeterministic(t.name, symbol)
    return EDT0LWitness(sys)


def etol_substitute(sys: ET0LSystem, f: Callable[[Symbol], Tuple[Symbol, ...]]) -> ET0LSystem:
    """Reemplaza cada terminal t por f(t) en el axioma y en las reglas"""
    def image(form: Form) -> Form:
        out: List[Symbol] = []
        for s in form:
            out.extend((s,) if s in sys.nonterminals else f(s))
        return tuple(out)

    terminals: Set[Symbol] = set()
    for t in sys.terminals:
        terminals.update(f(t))
    tables = []
    for t in sys.tables:
        rules = tuple(
            (symbol, tuple(dict.fromkeys(image(o) for o in options)))
            for symbol, options in t.rules
            if symbol in sys.nonterminals
        )
        tables.append(Table(t.name, rules, t.implicit))
    return ET0LSystem(sys.nonterminals, frozenset(terminals), image(sys.axiom), tuple(tables))
