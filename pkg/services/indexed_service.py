"""
Servicio de gramáticas indexadas y lineales indexadas.

Cada aparición de un no terminal en una forma sentencial lleva su pila de
flags (tope al final de la tupla). Una producción `A[f] -> ...` consume f;
`B+f` apila f en el hijo B. Con `linear_child` definido solo ese hijo hereda
la pila; sin él todos los hijos heredan una copia. Los hijos que no heredan
arrancan con una pila nueva (`$` si la gramática lo declara).
"""

import functools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from core.errors import MalformedProduction, ShapeViolation
from core.logger import get_logger
from core.words import EPS_TOKEN, SEPARATOR, LengthBudget, PairLetter, Symbol
from models.RelkitModels import EnumerationResult, GrammarKind, KindReport, Viewpoint
from services.grammar_service import ContextFreeGrammar, Production, make_grammar

logger = get_logger(__name__)

BOTTOM = "$"


@dataclass(frozen=True)
class NonterminalRef:
    """No terminal del lado derecho con los flags que apila"""
    name: str
    pushes: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return self.name + "".join(f"+{f}" for f in self.pushes)


RhsItem = Union[str, PairLetter, NonterminalRef]


def is_terminal_item(item: RhsItem) -> bool:
    return not isinstance(item, NonterminalRef)


@dataclass(frozen=True)
class IndexedProduction:
    lhs: str
    rhs: Tuple[RhsItem, ...]
    consumed_flag: Optional[str] = None
    linear_child: Optional[int] = None

    @property
    def children(self) -> List[NonterminalRef]:
        return [item for item in self.rhs if isinstance(item, NonterminalRef)]

    @property
    def terminal_count(self) -> int:
        return sum(1 for item in self.rhs if is_terminal_item(item))

    def inherits(self, ordinal: int) -> bool:
        return self.linear_child is None or self.linear_child == ordinal

    def __str__(self) -> str:
        head = self.lhs + (f"[{self.consumed_flag}]" if self.consumed_flag else "")
        marked = self.linear_child is not None and len(self.children) > 1
        parts = []
        ordinal = 0
        for item in self.rhs:
            if isinstance(item, NonterminalRef):
                mark = "^" if marked and ordinal == self.linear_child else ""
                parts.append(mark + str(item))
                ordinal += 1
            else:
                parts.append(str(item))
        return f"{head} -> {' '.join(parts) if parts else EPS_TOKEN}"


def indexed_production(
    lhs: str,
    rhs: Sequence[RhsItem],
    consumed_flag: Optional[str] = None,
    linear_child: Optional[int] = None,
) -> IndexedProduction:
    """Con un único no terminal a la derecha, ese hijo queda designado"""
    rhs = tuple(rhs)
    if linear_child is None and sum(1 for i in rhs if isinstance(i, NonterminalRef)) == 1:
        linear_child = 0
    return IndexedProduction(lhs, rhs, consumed_flag, linear_child)


def classify(productions: Iterable[IndexedProduction]) -> GrammarKind:
    for p in productions:
        if p.children and p.linear_child is None:
            return GrammarKind.INDEXED
    return GrammarKind.LINEAR_INDEXED


@dataclass(frozen=True)
class IndexedGrammar:
    nonterminals: FrozenSet[str]
    terminals: FrozenSet[Symbol]
    flags: FrozenSet[str]
    start: str
    productions: Tuple[IndexedProduction, ...]
    kind: GrammarKind = GrammarKind.INDEXED

    def __post_init__(self):
        if self.start not in self.nonterminals:
            raise MalformedProduction(self.start, "start symbol is not a nonterminal")
        for p in self.productions:
            _check_production(self, p)
        if self.kind == GrammarKind.LINEAR_INDEXED and classify(self.productions) != GrammarKind.LINEAR_INDEXED:
            raise MalformedProduction(
                next(p for p in self.productions if p.children and p.linear_child is None),
                "linear-indexed grammar needs a designated stack inheritor",
            )

    @property
    def fresh_stack(self) -> Tuple[str, ...]:
        return (BOTTOM,) if BOTTOM in self.flags else ()

    @functools.cached_property
    def by_lhs(self) -> Dict[str, Tuple[IndexedProduction, ...]]:
        table: Dict[str, List[IndexedProduction]] = {a: [] for a in self.nonterminals}
        for p in self.productions:
            table[p.lhs].append(p)
        return {a: tuple(ps) for a, ps in table.items()}

    @property
    def uses_flags(self) -> bool:
        return any(p.consumed_flag or any(c.pushes for c in p.children) for p in self.productions)


def _check_production(g: IndexedGrammar, p: IndexedProduction) -> None:
    if p.lhs not in g.nonterminals:
        raise MalformedProduction(p, f"undeclared nonterminal {p.lhs!r}")
    if p.consumed_flag is not None and p.consumed_flag not in g.flags:
        raise MalformedProduction(p, f"undeclared flag {p.consumed_flag!r}")
    for item in p.rhs:
        if isinstance(item, NonterminalRef):
            if item.name not in g.nonterminals:
                raise MalformedProduction(p, f"undeclared nonterminal {item.name!r}")
            for f in item.pushes:
                if f not in g.flags:
                    raise MalformedProduction(p, f"undeclared flag {f!r}")
        elif item not in g.terminals:
            raise MalformedProduction(p, f"undeclared terminal {item!r}")
    if p.linear_child is not None and not 0 <= p.linear_child < len(p.children):
        raise MalformedProduction(p, "linear child index out of range")


def make_indexed_grammar(
    productions: Iterable[IndexedProduction],
    start: str,
    terminals: Iterable[Symbol] = (),
    flags: Iterable[str] = (),
    nonterminals: Iterable[str] = (),
    kind: Optional[GrammarKind] = None,
) -> IndexedGrammar:
    """Infiere no terminales, terminales, flags y la clase"""
    productions = tuple(productions)
    nts = set(nonterminals) | {start}
    terms = set(terminals)
    fl = set(flags)
    for p in productions:
        nts.add(p.lhs)
        if p.consumed_flag:
            fl.add(p.consumed_flag)
        for item in p.rhs:
            if isinstance(item, NonterminalRef):
                nts.add(item.name)
                fl.update(item.pushes)
            else:
                terms.add(item)
    return IndexedGrammar(
        nonterminals=frozenset(nts),
        terminals=frozenset(terms),
        flags=frozenset(fl),
        start=start,
        productions=productions,
        kind=kind or classify(productions),
    )


# ================================
# VALIDACIÓN
# ================================

def ig_validate(g: IndexedGrammar) -> KindReport:
    """Lineal indexada si cada producción designa un único heredero de la pila"""
    for p in g.productions:
        _check_production(g, p)
    shared = [str(p) for p in g.productions if p.children and p.linear_child is None]
    total = len(g.productions)
    return KindReport(
        kind=GrammarKind.INDEXED if shared else GrammarKind.LINEAR_INDEXED,
        total_productions=total,
        linear_productions=total - len(shared),
        shared_stack=shared,
    )


@dataclass(frozen=True)
class PartitionedIndexedGrammar:
    """Gramática con N = N_L ⊔ N_# ⊔ N_R y la fila de la tabla de cada producción.

    1: A_#(f) → α_L # γ_R
    2: A_#(f) → α_L B_# γ_R
    3: A_L(f) → α_L
    4: A_R(f) → α_R
    5: A_H → B_H f
    """
    grammar: IndexedGrammar
    n_left: FrozenSet[str]
    n_hash: FrozenSet[str]
    n_right: FrozenSet[str]
    rows: Tuple[int, ...]

    def part_of(self, nonterminal: str) -> str:
        if nonterminal in self.n_left:
            return "L"
        if nonterminal in self.n_hash:
            return "#"
        return "R"


def _row_of(p: IndexedProduction, part: Dict[str, str]) -> int:
    h = part[p.lhs]
    children = p.children
    if (
        len(p.rhs) == 1
        and children
        and children[0].pushes
        and p.consumed_flag is None
        and part[children[0].name] == h
    ):
        return 5

    def side_ok(items: Sequence[RhsItem], side: str) -> Optional[str]:
        for item in items:
            if isinstance(item, NonterminalRef):
                if part[item.name] != side:
                    return f"{item.name} is not in N_{side}"
            elif item == SEPARATOR:
                return "unexpected #"
            elif isinstance(item, PairLetter):
                return f"pair letter {item} in an unfolded grammar"
        return None

    if h == "L":
        reason = side_ok(p.rhs, "L")
        if reason:
            raise ShapeViolation(p, reason)
        return 3
    if h == "R":
        reason = side_ok(p.rhs, "R")
        if reason:
            raise ShapeViolation(p, reason)
        return 4

    hashes = [i for i, item in enumerate(p.rhs) if item == SEPARATOR]
    middles = [i for i, item in enumerate(p.rhs) if isinstance(item, NonterminalRef) and part[item.name] == "#"]
    if len(hashes) + len(middles) != 1:
        raise ShapeViolation(p, "N_# productions have exactly one # or one N_# nonterminal")
    k = (hashes or middles)[0]
    reason = side_ok(p.rhs[:k], "L") or side_ok(p.rhs[k + 1:], "R")
    if reason:
        raise ShapeViolation(p, reason)
    return 1 if hashes else 2


def ig_validate_partitioned(
    g: IndexedGrammar, n_left: Iterable[str], n_hash: Iterable[str], n_right: Iterable[str]
) -> PartitionedIndexedGrammar:
    n_left, n_hash, n_right = frozenset(n_left), frozenset(n_hash), frozenset(n_right)
    declared = n_left | n_hash | n_right
    if declared != g.nonterminals or len(n_left) + len(n_hash) + len(n_right) != len(declared):
        raise ShapeViolation(sorted(g.nonterminals), "N_L, N_#, N_R must partition the nonterminals")
    if g.start not in n_hash:
        raise ShapeViolation(g.start, "start symbol must lie in N_#")
    part = {a: "L" for a in n_left}
    part.update({a: "#" for a in n_hash})
    part.update({a: "R" for a in n_right})
    rows = tuple(_row_of(p, part) for p in g.productions)
    return PartitionedIndexedGrammar(g, n_left, n_hash, n_right, rows)


# ================================
# ENUMERACIÓN
# ================================

class _Occ(NamedTuple):
    name: str
    stack: Tuple[str, ...]


def _is_terminal(item) -> bool:
    return not isinstance(item, _Occ)


def erased_min_yields(g: IndexedGrammar) -> Dict[str, int]:
    """Rendimiento mínimo de la CFG sin flags: cota inferior válida"""
    inf = 10 ** 9
    best = {a: inf for a in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            total = p.terminal_count + sum(best[c.name] for c in p.children)
            if total < best[p.lhs]:
                best[p.lhs] = total
                changed = True
    return best


class StackWeights(NamedTuple):
    """Cotas por aparición (A, σ) con k flags por encima del `$` más alto.

    pop[f]: terminales desde que se consume f hasta la siguiente consumición.
    lead[A]: terminales que A produce antes de consumir el tope.
    escape[A]: costo mínimo de una producción alcanzable que descarta la pila.
    """
    pop: Dict[str, int]
    lead: Dict[str, int]
    escape: Dict[str, int]

    def bound(self, name: str, stack: Tuple[str, ...], cap: int) -> int:
        total = self.lead[name]
        for f in reversed(stack):
            if f == BOTTOM or total >= cap:
                break
            total += self.pop[f]
        return min(total, self.escape[name], cap)


def _chain(p: IndexedProduction) -> List[int]:
    """Hijos que siguen con la pila medida (un `$` apilado la corta)"""
    return [k for k, c in enumerate(p.children) if p.inherits(k) and BOTTOM not in c.pushes]


def flag_weights(g: IndexedGrammar, cap: int) -> StackWeights:
    """Punto fijo desde `cap` hacia abajo.

    Toda derivación desde (A, σ) consume los flags medidos de σ uno por uno
    o pasa por una producción que descarta la pila, así que produce al menos
    min(lead[A] + Σ pop[f], escape[A]) terminales.
    """
    mins = erased_min_yields(g)
    pop = {f: cap for f in g.flags if f != BOTTOM}
    lead = {a: cap for a in g.nonterminals}
    escape = {a: cap for a in g.nonterminals}

    def through_chain(p: IndexedProduction, chain: List[int]) -> int:
        side = p.terminal_count + sum(mins[c.name] for c in p.children)
        best = cap
        for k in chain:
            child = p.children[k]
            cost = side - mins[child.name] + lead[child.name] + sum(pop[f] for f in child.pushes)
            best = min(best, cost)
        return best

    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.consumed_flag == BOTTOM:
                if lead[p.lhs] > 0:
                    lead[p.lhs] = 0
                    changed = True
                continue
            chain = _chain(p)
            if not chain:
                cost = min(cap, p.terminal_count + sum(mins[c.name] for c in p.children))
                if cost < escape[p.lhs]:
                    escape[p.lhs] = cost
                    changed = True
                continue
            for k in chain:
                reach = escape[p.children[k].name]
                if reach < escape[p.lhs]:
                    escape[p.lhs] = reach
                    changed = True
            if p.consumed_flag is None:
                cost = through_chain(p, chain)
                if cost < lead[p.lhs]:
                    lead[p.lhs] = cost
                    changed = True
            else:
                if lead[p.lhs] > 0:
                    lead[p.lhs] = 0
                    changed = True
                cost = through_chain(p, chain)
                if cost < pop[p.consumed_flag]:
                    pop[p.consumed_flag] = cost
                    changed = True
    return StackWeights(pop, lead, escape)


def ig_enumerate(
    g: IndexedGrammar,
    maxlen: int,
    max_steps: int,
    viewpoint: Viewpoint = Viewpoint.PLAIN,
    max_stack: Optional[int] = None,
) -> EnumerationResult:
    """Búsqueda en anchura de derivaciones por la izquierda.

    Correcta (toda palabra emitida es derivable) y completa respecto de
    max_steps y max_stack; `complete` indica si alguna cota recortó.
    """
    budget = LengthBudget(viewpoint, maxlen)
    capacity = budget.capacity
    mins = erased_min_yields(g)
    weights = flag_weights(g, capacity + 1)
    stack_cap = max_steps + len(g.fresh_stack) if max_stack is None else max_stack

    bounds: Dict[_Occ, int] = {}

    def lower_bound(occ: _Occ) -> int:
        if occ not in bounds:
            bounds[occ] = max(mins[occ.name], weights.bound(occ.name, occ.stack, capacity + 1))
        return bounds[occ]

    def admissible(form: Tuple) -> bool:
        total = 0
        for item in form:
            total += 1 if _is_terminal(item) else lower_bound(item)
            if total > capacity:
                return False
        if not budget.admits_form(form, _is_terminal):
            return False
        if budget.viewpoint == Viewpoint.UNFOLDED and SEPARATOR in form:
            h = form.index(SEPARATOR)
            left = sum(1 if _is_terminal(i) else lower_bound(i) for i in form[:h])
            right = sum(1 if _is_terminal(i) else lower_bound(i) for i in form[h + 1:])
            return left <= maxlen and right <= maxlen
        return True

    start = (_Occ(g.start, g.fresh_stack),)
    frontier = [start] if admissible(start) else []
    seen: Set[Tuple] = set(frontier)
    words: Set[Tuple[Symbol, ...]] = set()
    truncated = False
    explored = 0

    for step in range(max_steps + 1):
        nxt: List[Tuple] = []
        for form in frontier:
            explored += 1
            i = next((k for k, item in enumerate(form) if not _is_terminal(item)), None)
            if i is None:
                if budget.admits(form):
                    words.add(form)
                continue
            if step == max_steps:
                truncated = True
                continue
            occ = form[i]
            for p in g.by_lhs[occ.name]:
                if p.consumed_flag is not None:
                    if not occ.stack or occ.stack[-1] != p.consumed_flag:
                        continue
                    base = occ.stack[:-1]
                else:
                    base = occ.stack
                items = []
                ordinal = 0
                too_deep = False
                for item in p.rhs:
                    if isinstance(item, NonterminalRef):
                        stack = (base if p.inherits(ordinal) else g.fresh_stack) + item.pushes
                        ordinal += 1
                        if len(stack) > stack_cap:
                            too_deep = True
                        items.append(_Occ(item.name, stack))
                    else:
                        items.append(item)
                if too_deep:
                    truncated = True
                    continue
                new_form = form[:i] + tuple(items) + form[i + 1:]
                if new_form in seen or not admissible(new_form):
                    continue
                seen.add(new_form)
                nxt.append(new_form)
        frontier = nxt
        if not frontier:
            break

    logger.debug(
        "ig_enumerate: cota=%d pasos=%d -> %d palabras, %d formas, completo=%s",
        maxlen, max_steps, len(words), explored, not truncated,
    )
    return EnumerationResult(
        words=frozenset(words),
        bound=maxlen,
        viewpoint=budget.viewpoint,
        complete=not truncated,
        explored=explored,
    )


def ig_member(g: IndexedGrammar, word: Sequence[Symbol], max_steps: int) -> bool:
    word = tuple(word)
    result = ig_enumerate(g, len(word), max_steps)
    return word in result.words


# ================================
# TRANSFORMACIONES
# ================================

def ig_reverse(g: IndexedGrammar) -> IndexedGrammar:
    """Invierte cada lado derecho; el hijo lineal se reindexa"""
    prods = []
    for p in g.productions:
        k = len(p.children)
        linear = None if p.linear_child is None else k - 1 - p.linear_child
        prods.append(IndexedProduction(p.lhs, tuple(reversed(p.rhs)), p.consumed_flag, linear))
    return IndexedGrammar(g.nonterminals, g.terminals, g.flags, g.start, tuple(prods), g.kind)


def ig_rename(g: IndexedGrammar, suffix: str) -> IndexedGrammar:
    """Copia con todos los no terminales renombrados"""
    def ren(item):
        if isinstance(item, NonterminalRef):
            return NonterminalRef(item.name + suffix, item.pushes)
        return item

    prods = tuple(
        IndexedProduction(p.lhs + suffix, tuple(ren(i) for i in p.rhs), p.consumed_flag, p.linear_child)
        for p in g.productions
    )
    return IndexedGrammar(
        frozenset(a + suffix for a in g.nonterminals), g.terminals, g.flags, g.start + suffix, prods, g.kind
    )


def ig_substitute(g: IndexedGrammar, f) -> IndexedGrammar:
    """Reemplaza cada terminal t por la palabra f(t)"""
    prods = []
    for p in g.productions:
        rhs: List[RhsItem] = []
        for item in p.rhs:
            rhs.extend((item,) if isinstance(item, NonterminalRef) else f(item))
        prods.append(IndexedProduction(p.lhs, tuple(rhs), p.consumed_flag, p.linear_child))
    return make_indexed_grammar(prods, g.start, flags=g.flags, nonterminals=g.nonterminals, kind=g.kind)


def ig_from_cfg(g: ContextFreeGrammar) -> IndexedGrammar:
    """CFG vista como gramática lineal indexada sin flags (primer hijo designado)"""
    prods = []
    for p in g.productions:
        rhs = tuple(NonterminalRef(s) if g.is_nonterminal(s) else s for s in p.rhs)
        has_children = any(isinstance(i, NonterminalRef) for i in rhs)
        prods.append(IndexedProduction(p.lhs, rhs, None, 0 if has_children else None))
    return IndexedGrammar(
        g.nonterminals, g.terminals, frozenset(), g.start, tuple(prods), GrammarKind.LINEAR_INDEXED
    )


def ig_to_cfg(g: IndexedGrammar) -> Optional[ContextFreeGrammar]:
    """La CFG subyacente si la gramática no usa flags"""
    if g.uses_flags:
        return None
    prods = [
        Production(p.lhs, tuple(i.name if isinstance(i, NonterminalRef) else i for i in p.rhs))
        for p in g.productions
    ]
    return make_grammar(prods, g.start, terminals=g.terminals, nonterminals=g.nonterminals)
