"""
Servicio de autómatas: NFA, autómatas de un contador (ciego o con test de cero),
transductores de dos cintas y autómatas de pila.

Todas las máquinas son inmutables. Las corridas exploran configuraciones por
anchura con conjuntos de visitados; las cadenas de transiciones ε se acotan
con `settings.EPS_CHAIN_BOUND` salvo que se indique otra cota.
"""

import functools
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from core.config import settings
from core.errors import GuardedInput, MalformedProduction
from core.logger import get_logger
from core.words import LengthBudget, Pair, RelationSample, Symbol, symbol_key
from models.RelkitModels import CounterMode, Guard, PdaAcceptance, Viewpoint
from services.grammar_service import LeftRegularGrammar, Production, fresh_name, make_grammar, validate_left_regular

logger = get_logger(__name__)

Config = Tuple[str, int]


def _check_states(kind: str, states: FrozenSet[str], used: Iterable[str]) -> None:
    for q in used:
        if q not in states:
            raise MalformedProduction(q, f"{kind} uses an undeclared state")


def _coreachable(finals: Iterable[str], edges: Iterable[Tuple[str, str]]) -> Set[str]:
    """Estados desde los que se alcanza algún final"""
    back: Dict[str, Set[str]] = {}
    for s, t in edges:
        back.setdefault(t, set()).add(s)
    live = set(finals)
    stack = list(live)
    while stack:
        for s in back.get(stack.pop(), ()):
            if s not in live:
                live.add(s)
                stack.append(s)
    return live


# ================================
# NFA
# ================================

@dataclass(frozen=True)
class NfaTransition:
    source: str
    symbol: Optional[Symbol]
    target: str

    def __str__(self) -> str:
        return f"{self.source} -{'ε' if self.symbol is None else self.symbol}-> {self.target}"


@dataclass(frozen=True)
class Nfa:
    states: FrozenSet[str]
    alphabet: FrozenSet[Symbol]
    transitions: Tuple[NfaTransition, ...]
    initial: FrozenSet[str]
    finals: FrozenSet[str]

    def __post_init__(self):
        _check_states("nfa", self.states, self.initial | self.finals)
        for t in self.transitions:
            _check_states("nfa", self.states, (t.source, t.target))
            if t.symbol is not None and t.symbol not in self.alphabet:
                raise MalformedProduction(t, f"symbol {t.symbol!r} outside the alphabet")

    @functools.cached_property
    def moves(self) -> Dict[str, Tuple[NfaTransition, ...]]:
        table: Dict[str, List[NfaTransition]] = {q: [] for q in self.states}
        for t in self.transitions:
            table[t.source].append(t)
        return {q: tuple(ts) for q, ts in table.items()}

    @functools.cached_property
    def live(self) -> FrozenSet[str]:
        return frozenset(_coreachable(self.finals, ((t.source, t.target) for t in self.transitions)))

    def closure(self, states: Iterable[str]) -> FrozenSet[str]:
        seen = set(states)
        stack = list(seen)
        while stack:
            for t in self.moves[stack.pop()]:
                if t.symbol is None and t.target not in seen:
                    seen.add(t.target)
                    stack.append(t.target)
        return frozenset(seen)

    def step(self, states: FrozenSet[str], symbol: Symbol) -> FrozenSet[str]:
        return self.closure(t.target for q in states for t in self.moves[q] if t.symbol == symbol)

    def accepts(self, word: Sequence[Symbol]) -> bool:
        return nfa_run(self, word)


def make_nfa(
    transitions: Iterable[Tuple[str, Optional[Symbol], str]],
    initial: Iterable[str],
    finals: Iterable[str],
    alphabet: Iterable[Symbol] = (),
    states: Iterable[str] = (),
) -> Nfa:
    trans = tuple(NfaTransition(s, a, t) for s, a, t in transitions)
    initial, finals = frozenset(initial), frozenset(finals)
    all_states = set(states) | initial | finals
    letters = set(alphabet)
    for t in trans:
        all_states.update((t.source, t.target))
        if t.symbol is not None:
            letters.add(t.symbol)
    return Nfa(frozenset(all_states), frozenset(letters), trans, initial, finals)


def nfa_run(a: Nfa, w: Sequence[Symbol]) -> bool:
    current = a.closure(a.initial)
    for s in w:
        current = a.step(current, s)
        if not current:
            return False
    return bool(current & a.finals)


def nfa_enumerate(
    a: Nfa, maxlen: int, viewpoint: Viewpoint = Viewpoint.PLAIN
) -> FrozenSet[Tuple[Symbol, ...]]:
    """Exactamente las palabras aceptadas dentro de la cota"""
    budget = LengthBudget(viewpoint, maxlen)
    letters = sorted(a.alphabet, key=symbol_key)
    start = a.closure(a.initial) & a.live
    words: Set[Tuple[Symbol, ...]] = set()
    frontier = [((), budget.start(), start)] if start else []
    while frontier:
        nxt = []
        for word, counts, current in frontier:
            if current & a.finals and budget.admits(word):
                words.add(word)
            for s in letters:
                c = budget.step(counts, s)
                if c is None:
                    continue
                succ = a.step(current, s) & a.live
                if succ:
                    nxt.append((word + (s,), c, succ))
        frontier = nxt
    logger.debug("nfa_enumerate: cota=%d -> %d palabras", maxlen, len(words))
    return frozenset(words)


def left_regular_from_nfa(a: Nfa) -> LeftRegularGrammar:
    """Un no terminal por estado: q → a r, q → r (ε), q → ε si q es final"""
    taken = {s for s in a.alphabet if isinstance(s, str) and not isinstance(s, tuple)}
    names: Dict[str, str] = {}
    for q in sorted(a.states):
        names[q] = q if q not in taken else fresh_name(q, taken | set(names.values()))
    prods: List[Production] = []
    for t in a.transitions:
        rhs = (names[t.target],) if t.symbol is None else (t.symbol, names[t.target])
        prods.append(Production(names[t.source], rhs))
    for q in sorted(a.finals):
        prods.append(Production(names[q], ()))
    if len(a.initial) == 1:
        start = names[next(iter(a.initial))]
    else:
        start = fresh_name("S", set(names.values()) | taken)
        prods.extend(Production(start, (names[q],)) for q in sorted(a.initial))
    g = make_grammar(prods, start, terminals=a.alphabet, nonterminals=names.values())
    return validate_left_regular(g)


# ================================
# AUTÓMATAS DE UN CONTADOR
# ================================

@dataclass(frozen=True)
class CounterTransition:
    source: str
    symbol: Optional[Symbol]
    guard: Guard
    delta: int
    target: str

    def __str__(self) -> str:
        label = "ε" if self.symbol is None else str(self.symbol)
        guard = " =0" if self.guard == Guard.ZERO else ""
        return f"{self.source} -{label}{guard} {self.delta:+d}-> {self.target}"


@dataclass(frozen=True)
class CounterAutomaton:
    """Acepta con estado final y contador exactamente 0 al terminar la entrada.

    blind: el contador recorre ℤ y no hay tests de cero.
    tested: el contador no puede bajar de 0; se permite la guarda `=0`.
    """
    states: FrozenSet[str]
    alphabet: FrozenSet[Symbol]
    transitions: Tuple[CounterTransition, ...]
    initial: FrozenSet[str]
    finals: FrozenSet[str]
    mode: CounterMode = CounterMode.BLIND

    def __post_init__(self):
        _check_states("counter automaton", self.states, self.initial | self.finals)
        for t in self.transitions:
            _check_states("counter automaton", self.states, (t.source, t.target))
            if t.symbol is not None and t.symbol not in self.alphabet:
                raise MalformedProduction(t, f"symbol {t.symbol!r} outside the alphabet")
            if self.mode == CounterMode.BLIND and t.guard == Guard.ZERO:
                raise MalformedProduction(t, "blind counter automata cannot test for zero")

    @functools.cached_property
    def moves(self) -> Dict[str, Tuple[CounterTransition, ...]]:
        table: Dict[str, List[CounterTransition]] = {q: [] for q in self.states}
        for t in self.transitions:
            table[t.source].append(t)
        return {q: tuple(ts) for q, ts in table.items()}

    @functools.cached_property
    def live(self) -> FrozenSet[str]:
        return frozenset(_coreachable(self.finals, ((t.source, t.target) for t in self.transitions)))

    @property
    def max_delta(self) -> int:
        return max((abs(t.delta) for t in self.transitions), default=0)

    @property
    def uses_guards(self) -> bool:
        return any(t.guard == Guard.ZERO for t in self.transitions)

    def accepts(self, word: Sequence[Symbol]) -> bool:
        return oca_run(self, word)


def make_counter_automaton(
    transitions: Iterable[Tuple],
    initial: Iterable[str],
    finals: Iterable[str],
    mode: CounterMode = CounterMode.BLIND,
    alphabet: Iterable[Symbol] = (),
    states: Iterable[str] = (),
) -> CounterAutomaton:
    """Transiciones como (origen, símbolo, delta, destino) o (origen, símbolo, guarda, delta, destino)"""
    trans = []
    for item in transitions:
        if len(item) == 4:
            s, a, d, t = item
            g = Guard.NONE
        else:
            s, a, g, d, t = item
        trans.append(CounterTransition(s, a, Guard(g), int(d), t))
    initial, finals = frozenset(initial), frozenset(finals)
    all_states = set(states) | initial | finals
    letters = set(alphabet)
    for t in trans:
        all_states.update((t.source, t.target))
        if t.symbol is not None:
            letters.add(t.symbol)
    return CounterAutomaton(frozenset(all_states), frozenset(letters), tuple(trans), initial, finals, CounterMode(mode))


def _fire(a: CounterAutomaton, t: CounterTransition, counter: int) -> Optional[int]:
    if t.guard == Guard.ZERO and counter != 0:
        return None
    value = counter + t.delta
    if a.mode == CounterMode.TESTED and value < 0:
        return None
    return value


def _eps_closure(a: CounterAutomaton, configs: Iterable[Config], step_bound: int, limit: Optional[int] = None) -> Set[Config]:
    """Configuraciones alcanzables con a lo sumo step_bound transiciones ε"""
    seen = set(configs)
    frontier = list(seen)
    for _ in range(step_bound):
        nxt = []
        for q, c in frontier:
            for t in a.moves[q]:
                if t.symbol is not None:
                    continue
                value = _fire(a, t, c)
                if value is None or (limit is not None and abs(value) > limit):
                    continue
                conf = (t.target, value)
                if conf not in seen:
                    seen.add(conf)
                    nxt.append(conf)
        if not nxt:
            break
        frontier = nxt
    return seen


def _read(a: CounterAutomaton, configs: Iterable[Config], symbol: Symbol, limit: Optional[int] = None) -> Set[Config]:
    out: Set[Config] = set()
    for q, c in configs:
        for t in a.moves[q]:
            if t.symbol != symbol:
                continue
            value = _fire(a, t, c)
            if value is None or (limit is not None and abs(value) > limit):
                continue
            out.add((t.target, value))
    return out


def oca_run(a: CounterAutomaton, w: Sequence[Symbol], step_bound: Optional[int] = None) -> bool:
    """Alguna corrida termina en un estado final con contador 0"""
    step_bound = settings.EPS_CHAIN_BOUND if step_bound is None else step_bound
    configs = _eps_closure(a, ((q, 0) for q in a.initial), step_bound)
    for s in w:
        configs = _eps_closure(a, _read(a, configs, s), step_bound)
        if not configs:
            return False
    return any(q in a.finals and c == 0 for q, c in configs)


def oca_enumerate(
    a: CounterAutomaton,
    maxlen: int,
    step_bound: Optional[int] = None,
    viewpoint: Viewpoint = Viewpoint.PLAIN,
) -> FrozenSet[Tuple[Symbol, ...]]:
    """Palabras aceptadas dentro de la cota.

    Se descarta una configuración cuyo contador ya no puede volver a 0 con
    los símbolos (y cadenas ε) que quedan.
    """
    step_bound = settings.EPS_CHAIN_BOUND if step_bound is None else step_bound
    budget = LengthBudget(viewpoint, maxlen)
    capacity = budget.capacity
    letters = sorted(a.alphabet, key=symbol_key)
    md = a.max_delta

    def limit(remaining: int) -> int:
        return (remaining * (step_bound + 1) + step_bound) * md

    def prune(configs: Set[Config], remaining: int) -> FrozenSet[Config]:
        lim = limit(remaining)
        return frozenset((q, c) for q, c in configs if q in a.live and abs(c) <= lim)

    start = prune(_eps_closure(a, ((q, 0) for q in a.initial), step_bound, limit(capacity)), capacity)
    words: Set[Tuple[Symbol, ...]] = set()
    frontier = [((), budget.start(), start)] if start else []
    while frontier:
        nxt = []
        for word, counts, configs in frontier:
            if any(q in a.finals and c == 0 for q, c in configs) and budget.admits(word):
                words.add(word)
            remaining = capacity - len(word) - 1
            if remaining < 0:
                continue
            for s in letters:
                c = budget.step(counts, s)
                if c is None:
                    continue
                lim = limit(remaining)
                succ = prune(_eps_closure(a, _read(a, configs, s, lim), step_bound, lim), remaining)
                if succ:
                    nxt.append((word + (s,), c, succ))
        frontier = nxt
    logger.debug("oca_enumerate: cota=%d -> %d palabras", maxlen, len(words))
    return frozenset(words)


def oca_reverse(a: CounterAutomaton) -> CounterAutomaton:
    """Invierte las transiciones, niega los incrementos e intercambia iniciales y finales"""
    if a.uses_guards:
        raise GuardedInput("cannot reverse a counter automaton with zero tests")
    trans = tuple(CounterTransition(t.target, t.symbol, Guard.NONE, -t.delta, t.source) for t in a.transitions)
    return CounterAutomaton(a.states, a.alphabet, trans, a.finals, a.initial, a.mode)


# ================================
# TRANSDUCTORES
# ================================

@dataclass(frozen=True)
class TransducerTransition:
    source: str
    label: Pair
    target: str

    def __str__(self) -> str:
        u, v = self.label
        return f"{self.source} -({''.join(u) or '.'},{''.join(v) or '.'})-> {self.target}"


@dataclass(frozen=True)
class Transducer:
    states: FrozenSet[str]
    alphabet: FrozenSet[str]
    transitions: Tuple[TransducerTransition, ...]
    initial: FrozenSet[str]
    finals: FrozenSet[str]

    def __post_init__(self):
        _check_states("transducer", self.states, self.initial | self.finals)
        for t in self.transitions:
            _check_states("transducer", self.states, (t.source, t.target))
            for s in t.label[0] + t.label[1]:
                if s not in self.alphabet:
                    raise MalformedProduction(t, f"symbol {s!r} outside the alphabet")

    @functools.cached_property
    def moves(self) -> Dict[str, Tuple[TransducerTransition, ...]]:
        table: Dict[str, List[TransducerTransition]] = {q: [] for q in self.states}
        for t in self.transitions:
            table[t.source].append(t)
        return {q: tuple(ts) for q, ts in table.items()}

    def accepts_pair(self, u: Sequence[str], v: Sequence[str]) -> bool:
        return transducer_run(self, u, v)


def make_transducer(
    transitions: Iterable[Tuple[str, Tuple[Sequence[str], Sequence[str]], str]],
    initial: Iterable[str],
    finals: Iterable[str],
    alphabet: Iterable[str] = (),
) -> Transducer:
    trans = tuple(TransducerTransition(s, (tuple(u), tuple(v)), t) for s, (u, v), t in transitions)
    initial, finals = frozenset(initial), frozenset(finals)
    states = set(initial | finals)
    letters = set(alphabet)
    for t in trans:
        states.update((t.source, t.target))
        letters.update(t.label[0])
        letters.update(t.label[1])
    return Transducer(frozenset(states), frozenset(letters), trans, initial, finals)


def transducer_enumerate(t: Transducer, maxlen: int) -> RelationSample:
    """Pares de concatenaciones de etiquetas con ambas componentes ≤ maxlen"""
    start = [(q, (), ()) for q in sorted(t.initial)]
    seen = set(start)
    queue = deque(start)
    pairs: Set[Pair] = set()
    while queue:
        q, u, v = queue.popleft()
        if q in t.finals:
            pairs.add((u, v))
        for tr in t.moves[q]:
            nu, nv = u + tr.label[0], v + tr.label[1]
            if len(nu) > maxlen or len(nv) > maxlen:
                continue
            conf = (tr.target, nu, nv)
            if conf not in seen:
                seen.add(conf)
                queue.append(conf)
    return RelationSample(bound=maxlen, pairs=frozenset(pairs))


def transducer_run(t: Transducer, u: Sequence[str], v: Sequence[str]) -> bool:
    u, v = tuple(u), tuple(v)
    start = [(q, 0, 0) for q in t.initial]
    seen = set(start)
    queue = deque(start)
    while queue:
        q, i, j = queue.popleft()
        if q in t.finals and i == len(u) and j == len(v):
            return True
        for tr in t.moves[q]:
            a, b = tr.label
            if u[i:i + len(a)] != a or v[j:j + len(b)] != b:
                continue
            conf = (tr.target, i + len(a), j + len(b))
            if conf not in seen:
                seen.add(conf)
                queue.append(conf)
    return False


# ================================
# AUTÓMATAS DE PILA
# ================================

Stack = Tuple[str, ...]


@dataclass(frozen=True)
class PdaTransition:
    """`top` se desapila si está definido; `push` se apila con su primer símbolo en el tope"""
    source: str
    symbol: Optional[Symbol]
    top: Optional[str]
    push: Tuple[str, ...]
    target: str

    def __str__(self) -> str:
        label = "ε" if self.symbol is None else str(self.symbol)
        return f"{self.source} -{label} top={self.top or 'ε'} push={''.join(self.push) or 'ε'}-> {self.target}"


@dataclass(frozen=True)
class PushdownAutomaton:
    states: FrozenSet[str]
    alphabet: FrozenSet[Symbol]
    stack_alphabet: FrozenSet[str]
    transitions: Tuple[PdaTransition, ...]
    initial: str
    finals: FrozenSet[str] = frozenset()
    acceptance: PdaAcceptance = PdaAcceptance.EMPTY_STACK
    bottom: Optional[str] = None

    def __post_init__(self):
        _check_states("pda", self.states, {self.initial} | self.finals)
        if self.bottom is not None and self.bottom not in self.stack_alphabet:
            raise MalformedProduction(self.bottom, "bottom marker outside the stack alphabet")
        for t in self.transitions:
            _check_states("pda", self.states, (t.source, t.target))
            if t.symbol is not None and t.symbol not in self.alphabet:
                raise MalformedProduction(t, f"symbol {t.symbol!r} outside the alphabet")
            for s in ((t.top,) if t.top else ()) + t.push:
                if s not in self.stack_alphabet:
                    raise MalformedProduction(t, f"stack symbol {s!r} undeclared")

    @functools.cached_property
    def moves(self) -> Dict[str, Tuple[PdaTransition, ...]]:
        table: Dict[str, List[PdaTransition]] = {q: [] for q in self.states}
        for t in self.transitions:
            table[t.source].append(t)
        return {q: tuple(ts) for q, ts in table.items()}

    @property
    def initial_stack(self) -> Stack:
        return (self.bottom,) if self.bottom else ()

    def accepting(self, state: str, stack: Stack) -> bool:
        if self.acceptance == PdaAcceptance.EMPTY_STACK:
            return not stack
        return state in self.finals

    def accepts(self, word: Sequence[Symbol]) -> bool:
        return pda_run(self, word)


def make_pda(
    transitions: Iterable[Tuple[str, Optional[Symbol], Optional[str], Sequence[str], str]],
    initial: str,
    finals: Iterable[str] = (),
    acceptance: PdaAcceptance = PdaAcceptance.EMPTY_STACK,
    bottom: Optional[str] = None,
    alphabet: Iterable[Symbol] = (),
    stack_alphabet: Iterable[str] = (),
) -> PushdownAutomaton:
    """Transiciones como (origen, símbolo, tope, apilados, destino)"""
    trans = tuple(PdaTransition(s, a, top, tuple(push), t) for s, a, top, push, t in transitions)
    finals = frozenset(finals)
    states = {initial} | set(finals)
    letters = set(alphabet)
    stack = set(stack_alphabet) | ({bottom} if bottom else set())
    for t in trans:
        states.update((t.source, t.target))
        if t.symbol is not None:
            letters.add(t.symbol)
        if t.top:
            stack.add(t.top)
        stack.update(t.push)
    return PushdownAutomaton(
        frozenset(states), frozenset(letters), frozenset(stack), trans,
        initial, finals, PdaAcceptance(acceptance), bottom,
    )


def _pda_apply(t: PdaTransition, stack: Stack) -> Optional[Stack]:
    if t.top is not None:
        if not stack or stack[-1] != t.top:
            return None
        stack = stack[:-1]
    return stack + tuple(reversed(t.push))


def pda_run(p: PushdownAutomaton, w: Sequence[Symbol], bound: Optional[int] = None) -> bool:
    """BFS sobre configuraciones con altura de pila ≤ bound"""
    w = tuple(w)
    if bound is None:
        bound = len(w) + len(p.initial_stack) + settings.EPS_CHAIN_BOUND
    start = (p.initial, 0, p.initial_stack)
    seen = {start}
    queue = deque([start])
    while queue:
        q, i, stack = queue.popleft()
        if i == len(w) and p.accepting(q, stack):
            return True
        for t in p.moves[q]:
            if t.symbol is not None and (i == len(w) or w[i] != t.symbol):
                continue
            new_stack = _pda_apply(t, stack)
            if new_stack is None or len(new_stack) > bound:
                continue
            conf = (t.target, i + (t.symbol is not None), new_stack)
            if conf not in seen:
                seen.add(conf)
                queue.append(conf)
    return False


def pda_enumerate(
    p: PushdownAutomaton,
    maxlen: int,
    viewpoint: Viewpoint = Viewpoint.PLAIN,
    stack_bound: Optional[int] = None,
) -> FrozenSet[Tuple[Symbol, ...]]:
    """Palabras aceptadas dentro de la cota, con la pila acotada por stack_bound"""
    budget = LengthBudget(viewpoint, maxlen)
    if stack_bound is None:
        stack_bound = budget.capacity + len(p.initial_stack) + settings.EPS_CHAIN_BOUND
    start = (p.initial, (), budget.start(), p.initial_stack)
    seen = {(p.initial, (), p.initial_stack)}
    queue = deque([start])
    words: Set[Tuple[Symbol, ...]] = set()
    while queue:
        q, word, counts, stack = queue.popleft()
        if p.accepting(q, stack) and budget.admits(word):
            words.add(word)
        for t in p.moves[q]:
            if t.symbol is None:
                new_word, new_counts = word, counts
            else:
                new_counts = budget.step(counts, t.symbol)
                if new_counts is None:
                    continue
                new_word = word + (t.symbol,)
            new_stack = _pda_apply(t, stack)
            if new_stack is None or len(new_stack) > stack_bound:
                continue
            key = (t.target, new_word, new_stack)
            if key not in seen:
                seen.add(key)
                queue.append((t.target, new_word, new_counts, new_stack))
    logger.debug("pda_enumerate: cota=%d -> %d palabras", maxlen, len(words))
    return frozenset(words)
