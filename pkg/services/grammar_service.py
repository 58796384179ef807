"""
Servicio de gramáticas regulares por la izquierda y libres de contexto.
Normalización (FNC), pertenencia (CYK) y enumeración acotada.
"""

import functools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from core.errors import LanguageNotShaped, MalformedProduction, NotLeftRegular, ShapeViolation
from core.logger import get_logger
from core.words import (
    EPS_TOKEN, SEPARATOR, LengthBudget, PairLetter, Symbol, format_word, symbol_key,
)
from models.RelkitModels import Viewpoint

logger = get_logger(__name__)

Measure = Tuple[int, int]
WordsByMeasure = Dict[Measure, Set[Tuple[Symbol, ...]]]


def fresh_name(base: str, taken: Set[str]) -> str:
    """Nombre nuevo a partir de `base`; lo agrega a `taken`"""
    name = base
    i = 1
    while name in taken:
        name = f"{base}{i}"
        i += 1
    taken.add(name)
    return name


def symbol_label(symbol: Symbol) -> str:
    if isinstance(symbol, PairLetter):
        return f"{symbol.left or 'e'}_{symbol.right or 'e'}"
    return str(symbol)


# ================================
# TIPOS
# ================================

@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: Tuple[Symbol, ...]

    def __str__(self) -> str:
        body = " ".join(str(s) for s in self.rhs) if self.rhs else EPS_TOKEN
        return f"{self.lhs} -> {body}"


@dataclass(frozen=True)
class ContextFreeGrammar:
    nonterminals: FrozenSet[str]
    terminals: FrozenSet[Symbol]
    start: str
    productions: Tuple[Production, ...]

    def __post_init__(self):
        if self.start not in self.nonterminals:
            raise MalformedProduction(self.start, "start symbol is not a nonterminal")
        clash = {t for t in self.terminals if isinstance(t, str) and t in self.nonterminals}
        if clash:
            raise MalformedProduction(sorted(clash), "symbols are both terminal and nonterminal")
        for p in self.productions:
            if p.lhs not in self.nonterminals:
                raise MalformedProduction(p, f"undeclared nonterminal {p.lhs!r}")
            for s in p.rhs:
                if not self.is_nonterminal(s) and s not in self.terminals:
                    raise MalformedProduction(p, f"undeclared symbol {s!r}")

    def is_nonterminal(self, symbol: Symbol) -> bool:
        return isinstance(symbol, str) and not isinstance(symbol, PairLetter) and symbol in self.nonterminals

    @functools.cached_property
    def by_lhs(self) -> Dict[str, Tuple[Production, ...]]:
        table: Dict[str, List[Production]] = {a: [] for a in self.nonterminals}
        for p in self.productions:
            table[p.lhs].append(p)
        return {a: tuple(ps) for a, ps in table.items()}


@dataclass(frozen=True)
class LeftRegularGrammar(ContextFreeGrammar):
    """Producciones A → aB, A → a, A → B o A → ε con a un solo terminal"""

    def __post_init__(self):
        super().__post_init__()
        for p in self.productions:
            if not _is_left_regular(self, p):
                raise NotLeftRegular(p)


@dataclass(frozen=True)
class PartitionedRegularGrammar(LeftRegularGrammar):
    """Gramática regular con N = N₁ ⊔ N₂ ⊔ N₃ respecto de la única aparición de #.

    N₁: A → aB o A → B con B ∈ N₁ ∪ N₂ (antes de #)
    N₂: A → # o A → #B con B ∈ N₃
    N₃: A → a, A → aB, A → B, A → ε con B ∈ N₃ (después de #)
    """
    n1: FrozenSet[str] = field(default_factory=frozenset)
    n2: FrozenSet[str] = field(default_factory=frozenset)
    n3: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        super().__post_init__()
        parts = [self.n1, self.n2, self.n3]
        if set().union(*parts) != set(self.nonterminals) or sum(len(x) for x in parts) != len(self.nonterminals):
            raise ShapeViolation(sorted(self.nonterminals), "N1, N2, N3 must partition the nonterminals")
        if self.start not in self.n1 | self.n2:
            raise ShapeViolation(self.start, "start symbol must lie in N1 or N2")
        for p in self.productions:
            reason = self._shape_error(p)
            if reason:
                raise ShapeViolation(p, reason)

    def part_of(self, nonterminal: str) -> int:
        if nonterminal in self.n1:
            return 1
        if nonterminal in self.n2:
            return 2
        return 3

    def _shape_error(self, p: Production) -> Optional[str]:
        part = self.part_of(p.lhs)
        nts = [s for s in p.rhs if self.is_nonterminal(s)]
        terms = [s for s in p.rhs if not self.is_nonterminal(s)]
        if part == 1:
            if not nts or nts[0] not in self.n1 | self.n2:
                return "N1 productions continue into N1 or N2"
            if SEPARATOR in terms:
                return "N1 productions cannot read #"
        elif part == 2:
            if terms != [SEPARATOR]:
                return "N2 productions read exactly #"
            if nts and nts[0] not in self.n3:
                return "N2 productions continue into N3"
        else:
            if SEPARATOR in terms:
                return "N3 productions cannot read #"
            if nts and nts[0] not in self.n3:
                return "N3 productions stay in N3"
        return None


def make_grammar(
    productions: Iterable[Production],
    start: str,
    terminals: Iterable[Symbol] = (),
    nonterminals: Iterable[str] = (),
) -> ContextFreeGrammar:
    """Construye una CFG infiriendo no terminales (lados izquierdos) y terminales"""
    productions = tuple(productions)
    nts = set(nonterminals) | {p.lhs for p in productions} | {start}
    terms = set(terminals)
    for p in productions:
        for s in p.rhs:
            if isinstance(s, PairLetter) or s not in nts:
                terms.add(s)
    return ContextFreeGrammar(frozenset(nts), frozenset(terms), start, productions)


def _is_left_regular(g: ContextFreeGrammar, p: Production) -> bool:
    rhs = p.rhs
    if len(rhs) == 0:
        return True
    if len(rhs) == 1:
        return True
    if len(rhs) == 2:
        return not g.is_nonterminal(rhs[0]) and g.is_nonterminal(rhs[1])
    return False


def _with_class(g: ContextFreeGrammar, cls, **extra):
    return cls(
        nonterminals=g.nonterminals,
        terminals=g.terminals,
        start=g.start,
        productions=g.productions,
        **extra,
    )


# ================================
# VALIDACIÓN Y PARTICIÓN
# ================================

def validate_left_regular(g: ContextFreeGrammar) -> LeftRegularGrammar:
    """Testigo tipado o NotLeftRegular con la primera producción culpable"""
    if isinstance(g, LeftRegularGrammar):
        return g
    return _with_class(g, LeftRegularGrammar)


def validate_mirrored_regular(g: ContextFreeGrammar) -> ContextFreeGrammar:
    """Forma mixta producida por la construcción de dos cintas:
    A → ε, A → t, A → tB, A → B o A → Bt"""
    for p in g.productions:
        rhs = p.rhs
        nts = [s for s in rhs if g.is_nonterminal(s)]
        if len(rhs) > 2 or len(nts) > 1 or (len(rhs) == 2 and len(nts) != 1):
            raise ShapeViolation(p, "not of mirrored-regular shape")
    return g


class _EpsFreeNfa:
    """Vista de una gramática regular como autómata sin transiciones ε"""

    def __init__(self, g: LeftRegularGrammar):
        taken = set(g.nonterminals)
        self.final_state = fresh_name("F", taken)
        self.start = g.start
        eps: Dict[str, Set[str]] = {q: set() for q in taken}
        moves: Dict[str, List[Tuple[Symbol, str]]] = {q: [] for q in taken}
        accepting = {self.final_state}
        for p in g.productions:
            if not p.rhs:
                accepting.add(p.lhs)
            elif len(p.rhs) == 1 and g.is_nonterminal(p.rhs[0]):
                eps[p.lhs].add(p.rhs[0])
            elif len(p.rhs) == 1:
                moves[p.lhs].append((p.rhs[0], self.final_state))
            else:
                moves[p.lhs].append((p.rhs[0], p.rhs[1]))
        self.states = sorted(taken)
        self.delta: Dict[str, List[Tuple[Symbol, str]]] = {}
        self.accepting: Set[str] = set()
        for q in self.states:
            closure = self._closure(q, eps)
            if closure & accepting:
                self.accepting.add(q)
            out = {(a, r) for c in closure for a, r in moves[c]}
            self.delta[q] = sorted(out, key=lambda m: (symbol_key(m[0]), m[1]))

    @staticmethod
    def _closure(q: str, eps: Dict[str, Set[str]]) -> Set[str]:
        seen = {q}
        stack = [q]
        while stack:
            for r in eps[stack.pop()]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen


def _shape_witness(nfa: _EpsFreeNfa) -> Optional[Tuple[Symbol, ...]]:
    """Palabra más corta del lenguaje sin exactamente un #, si existe"""
    start = (nfa.start, 0)
    parent: Dict[Tuple[str, int], Optional[Tuple[Tuple[str, int], Symbol]]] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q, phase = node
        if q in nfa.accepting and phase != 1:
            word: List[Symbol] = []
            while parent[node] is not None:
                node, a = parent[node]
                word.append(a)
            return tuple(reversed(word))
        for a, r in nfa.delta[q]:
            nxt = (r, min(phase + 1, 2) if a == SEPARATOR else phase)
            if nxt not in parent:
                parent[nxt] = (node, a)
                queue.append(nxt)
    return None


def partition_for_hash(g: LeftRegularGrammar) -> PartitionedRegularGrammar:
    """Producto de g con el autómata de tres fases de X*#X*"""
    g = validate_left_regular(g)
    nfa = _EpsFreeNfa(g)
    witness = _shape_witness(nfa)
    if witness is not None:
        raise LanguageNotShaped(format_word(witness))

    # fase 1 (después de #): estados que aceptan leyendo solo X
    live3: Set[str] = set(nfa.accepting)
    changed = True
    while changed:
        changed = False
        for q in nfa.states:
            if q not in live3 and any(a != SEPARATOR and r in live3 for a, r in nfa.delta[q]):
                live3.add(q)
                changed = True
    # fase 0: estados que llegan a un # seguido de algo aceptable
    live1: Set[str] = {q for q in nfa.states if any(a == SEPARATOR and r in live3 for a, r in nfa.delta[q])}
    hash_ready = set(live1)
    changed = True
    while changed:
        changed = False
        for q in nfa.states:
            if q not in live1 and any(a != SEPARATOR and r in live1 for a, r in nfa.delta[q]):
                live1.add(q)
                changed = True

    n1: Set[str] = set()
    n2: Set[str] = set()
    n3: Set[str] = set()
    prods: List[Production] = []
    queue = deque([(nfa.start, 0)])
    seen = {(nfa.start, 0)}

    def visit(node):
        if node not in seen:
            seen.add(node)
            queue.append(node)

    while queue:
        q, phase = queue.popleft()
        if phase == 0:
            if q not in live1:
                continue
            name = f"{q}_1"
            n1.add(name)
            for a, r in nfa.delta[q]:
                if a != SEPARATOR and r in live1:
                    prods.append(Production(name, (a, f"{r}_1")))
                    visit((r, 0))
            if q in hash_ready:
                prods.append(Production(name, (f"{q}_2",)))
                n2.add(f"{q}_2")
                for a, r in nfa.delta[q]:
                    if a == SEPARATOR and r in live3:
                        prods.append(Production(f"{q}_2", (SEPARATOR, f"{r}_3")))
                        visit((r, 1))
        else:
            name = f"{q}_3"
            n3.add(name)
            for a, r in nfa.delta[q]:
                if a != SEPARATOR and r in live3:
                    prods.append(Production(name, (a, f"{r}_3")))
                    visit((r, 1))
            if q in nfa.accepting:
                prods.append(Production(name, ()))

    start = f"{nfa.start}_1"
    if start not in n1:
        # lenguaje vacío: un símbolo inicial sin producciones
        n1.add(start)
    logger.debug("partition_for_hash: N1=%d N2=%d N3=%d", len(n1), len(n2), len(n3))
    return PartitionedRegularGrammar(
        nonterminals=frozenset(n1 | n2 | n3),
        terminals=frozenset(g.terminals | {SEPARATOR}),
        start=start,
        productions=tuple(prods),
        n1=frozenset(n1),
        n2=frozenset(n2),
        n3=frozenset(n3),
    )


# ================================
# FORMA NORMAL DE CHOMSKY
# ================================

def nullable_nonterminals(g: ContextFreeGrammar, productions: Optional[Iterable[Production]] = None) -> Set[str]:
    prods = list(g.productions if productions is None else productions)
    nullable: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in prods:
            if p.lhs not in nullable and all(s in nullable for s in p.rhs):
                nullable.add(p.lhs)
                changed = True
    return nullable


def _remove_useless(start: str, prods: Set[Production], is_nt: Callable[[Symbol], bool]) -> Set[Production]:
    productive: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in prods:
            if p.lhs not in productive and all(not is_nt(s) or s in productive for s in p.rhs):
                productive.add(p.lhs)
                changed = True
    prods = {p for p in prods if p.lhs in productive and all(not is_nt(s) or s in productive for s in p.rhs)}
    reachable = {start}
    stack = [start]
    while stack:
        a = stack.pop()
        for p in prods:
            if p.lhs == a:
                for s in p.rhs:
                    if is_nt(s) and s not in reachable:
                        reachable.add(s)
                        stack.append(s)
    return {p for p in prods if p.lhs in reachable}


def to_cnf(g: ContextFreeGrammar) -> ContextFreeGrammar:
    """START, TERM, BIN, DEL, UNIT y poda de símbolos inútiles"""
    taken = set(g.nonterminals)
    nts = set(g.nonterminals)
    prods: Set[Production] = set(g.productions)
    start = g.start

    # START: solo si el inicial aparece a la derecha
    if any(start in p.rhs for p in prods):
        start = fresh_name(f"{g.start}0", taken)
        nts.add(start)
        prods.add(Production(start, (g.start,)))

    def is_nt(s: Symbol) -> bool:
        return isinstance(s, str) and not isinstance(s, PairLetter) and s in nts

    # TERM
    wrappers: Dict[Symbol, str] = {}
    term_prods: Set[Production] = set()
    for p in sorted(prods, key=str):
        if len(p.rhs) < 2:
            term_prods.add(p)
            continue
        rhs = []
        for s in p.rhs:
            if is_nt(s):
                rhs.append(s)
                continue
            if s not in wrappers:
                wrappers[s] = fresh_name(f"T_{symbol_label(s)}", taken)
                nts.add(wrappers[s])
                term_prods.add(Production(wrappers[s], (s,)))
            rhs.append(wrappers[s])
        term_prods.add(Production(p.lhs, tuple(rhs)))

    # BIN
    bin_prods: Set[Production] = set()
    for p in sorted(term_prods, key=str):
        if len(p.rhs) <= 2:
            bin_prods.add(p)
            continue
        lhs = p.lhs
        for i, s in enumerate(p.rhs[:-2]):
            nxt = fresh_name(f"{p.lhs}_{i + 1}", taken)
            nts.add(nxt)
            bin_prods.add(Production(lhs, (s, nxt)))
            lhs = nxt
        bin_prods.add(Production(lhs, p.rhs[-2:]))

    # DEL
    nullable = nullable_nonterminals(g, bin_prods)
    del_prods: Set[Production] = set()
    for p in bin_prods:
        if not p.rhs:
            continue
        if len(p.rhs) == 2:
            a, b = p.rhs
            del_prods.add(p)
            if a in nullable:
                del_prods.add(Production(p.lhs, (b,)))
            if b in nullable:
                del_prods.add(Production(p.lhs, (a,)))
        else:
            del_prods.add(p)
    if start in nullable:
        del_prods.add(Production(start, ()))

    # UNIT
    units: Dict[str, Set[str]] = {a: {a} for a in nts}
    changed = True
    while changed:
        changed = False
        for p in del_prods:
            if len(p.rhs) == 1 and is_nt(p.rhs[0]):
                for a in nts:
                    if p.lhs in units[a] and p.rhs[0] not in units[a]:
                        units[a].add(p.rhs[0])
                        changed = True
    unit_free: Set[Production] = set()
    for a in nts:
        for b in units[a]:
            for p in del_prods:
                if p.lhs != b or (len(p.rhs) == 1 and is_nt(p.rhs[0])):
                    continue
                if not p.rhs and a != start:
                    continue
                unit_free.add(Production(a, p.rhs))

    final = _remove_useless(start, unit_free, is_nt)
    used = {p.lhs for p in final} | {start}
    ordered = tuple(sorted(final, key=lambda p: (p.lhs != start, p.lhs, str(p))))
    logger.debug("to_cnf: %d -> %d producciones", len(g.productions), len(ordered))
    return ContextFreeGrammar(
        nonterminals=frozenset(used),
        terminals=g.terminals,
        start=start,
        productions=ordered,
    )


def is_cnf(g: ContextFreeGrammar) -> bool:
    starts_on_rhs = any(g.start in p.rhs for p in g.productions)
    for p in g.productions:
        if not p.rhs:
            if p.lhs != g.start or starts_on_rhs:
                return False
        elif len(p.rhs) == 1:
            if g.is_nonterminal(p.rhs[0]):
                return False
        elif len(p.rhs) == 2:
            if not all(g.is_nonterminal(s) for s in p.rhs):
                return False
        else:
            return False
    return True


# ================================
# ENUMERACIÓN Y PERTENENCIA
# ================================

def min_yields(g: ContextFreeGrammar, budget: LengthBudget) -> Dict[str, Measure]:
    """Rendimiento terminal mínimo por componente (punto fijo)"""
    inf = 10 ** 9
    best: Dict[str, List[int]] = {a: [inf, inf] for a in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            total = [0, 0]
            for s in p.rhs:
                w = best[s] if g.is_nonterminal(s) else budget.weight(s)
                total[0] += w[0]
                total[1] += w[1]
            cur = best[p.lhs]
            for k in (0, 1):
                if total[k] < cur[k]:
                    cur[k] = total[k]
                    changed = True
    return {a: (v[0], v[1]) for a, v in best.items()}


def _fits(m: Measure, limits: Measure) -> bool:
    return m[0] <= limits[0] and m[1] <= limits[1]


def _concat(
    rhs: Sequence[Symbol],
    sources: Sequence[Optional[WordsByMeasure]],
    budget: LengthBudget,
    rest_min: Sequence[Measure],
    limits: Measure,
) -> WordsByMeasure:
    partial: WordsByMeasure = {(0, 0): {()}}
    for i, s in enumerate(rhs):
        src = sources[i]
        if src is None:
            w = budget.weight(s)
            src = {w: {(s,)}}
        nxt: WordsByMeasure = {}
        for m1, words1 in partial.items():
            for m2, words2 in src.items():
                m = (m1[0] + m2[0], m1[1] + m2[1])
                bound_m = (m[0] + rest_min[i + 1][0], m[1] + rest_min[i + 1][1])
                if not _fits(bound_m, limits):
                    continue
                bucket = nxt.setdefault(m, set())
                for u in words1:
                    for v in words2:
                        bucket.add(u + v)
        partial = nxt
        if not partial:
            break
    return partial


def cfg_enumerate(
    g: ContextFreeGrammar, maxlen: int, viewpoint: Viewpoint = Viewpoint.PLAIN
) -> FrozenSet[Tuple[Symbol, ...]]:
    """Exactamente las palabras de g dentro de la cota del punto de vista.

    Programación dinámica por medida (longitud, o longitudes de las dos
    componentes) con evaluación semi-ingenua; la poda usa el rendimiento
    mínimo de cada no terminal.
    """
    budget = LengthBudget(viewpoint, maxlen)
    limits = budget.limits()
    mins = min_yields(g, budget)
    inf = 10 ** 9
    usable = [
        p for p in g.productions
        if all(not g.is_nonterminal(s) or mins[s][0] < inf for s in p.rhs)
    ]

    lang: Dict[str, WordsByMeasure] = {a: {} for a in g.nonterminals}
    delta: Dict[str, WordsByMeasure] = {a: {} for a in g.nonterminals}

    def rest_min_of(rhs: Sequence[Symbol]) -> List[Measure]:
        rest = [(0, 0)] * (len(rhs) + 1)
        for i in range(len(rhs) - 1, -1, -1):
            s = rhs[i]
            w = mins[s] if g.is_nonterminal(s) else budget.weight(s)
            rest[i] = (rest[i + 1][0] + w[0], rest[i + 1][1] + w[1])
        return rest

    rest_mins = {p: rest_min_of(p.rhs) for p in usable}
    first_round = True
    while first_round or any(delta[a] for a in delta):
        new: Dict[str, WordsByMeasure] = {a: {} for a in g.nonterminals}
        for p in usable:
            positions = [i for i, s in enumerate(p.rhs) if g.is_nonterminal(s)]
            if first_round:
                variants = [[None] * len(p.rhs)] if not positions else []
            else:
                variants = []
                for j in positions:
                    if not delta[p.rhs[j]]:
                        continue
                    sources: List[Optional[WordsByMeasure]] = [None] * len(p.rhs)
                    for i in positions:
                        sources[i] = delta[p.rhs[i]] if i == j else lang[p.rhs[i]]
                    variants.append(sources)
            for sources in variants:
                produced = _concat(p.rhs, sources, budget, rest_mins[p], limits)
                target = lang[p.lhs]
                for m, words in produced.items():
                    old = target.get(m, set())
                    fresh = words - old
                    if fresh:
                        new[p.lhs].setdefault(m, set()).update(fresh)
        for a, buckets in new.items():
            for m, words in buckets.items():
                lang[a].setdefault(m, set()).update(words)
        delta = new
        first_round = False

    result = frozenset(
        w for words in lang[g.start].values() for w in words if budget.admits(w)
    )
    logger.debug("cfg_enumerate: cota=%d vista=%s -> %d palabras", maxlen, budget.viewpoint.value, len(result))
    return result


@functools.lru_cache(maxsize=64)
def _cnf_of(g: ContextFreeGrammar) -> ContextFreeGrammar:
    return to_cnf(g)


def cfg_member(g: ContextFreeGrammar, word: Sequence[Symbol]) -> bool:
    """CYK sobre la forma normal de Chomsky"""
    cnf = _cnf_of(g)
    word = tuple(word)
    n = len(word)
    if n == 0:
        return any(p.lhs == cnf.start and not p.rhs for p in cnf.productions)
    by_terminal: Dict[Symbol, Set[str]] = {}
    binary: List[Tuple[str, str, str]] = []
    for p in cnf.productions:
        if len(p.rhs) == 1:
            by_terminal.setdefault(p.rhs[0], set()).add(p.lhs)
        elif len(p.rhs) == 2:
            binary.append((p.lhs, p.rhs[0], p.rhs[1]))
    # table[i][l]: no terminales que derivan word[i:i+l]
    table: List[List[Set[str]]] = [[set() for _ in range(n + 1)] for _ in range(n)]
    for i, s in enumerate(word):
        table[i][1] = set(by_terminal.get(s, ()))
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            cell = table[i][length]
            for split in range(1, length):
                left = table[i][split]
                right = table[i + split][length - split]
                if not left or not right:
                    continue
                for a, b, c in binary:
                    if b in left and c in right:
                        cell.add(a)
    return cnf.start in table[0][n]


# ================================
# TRANSFORMACIONES SIMPLES
# ================================

def cfg_substitute(
    g: ContextFreeGrammar, f: Callable[[Symbol], Tuple[Symbol, ...]]
) -> ContextFreeGrammar:
    """Reemplaza cada terminal t por la palabra f(t).
    Una gramática regular sigue siendo regular (cadenas de no terminales nuevos)."""
    regular = isinstance(g, LeftRegularGrammar)
    taken = set(g.nonterminals)
    prods: List[Production] = []
    for p in g.productions:
        if not regular:
            rhs: List[Symbol] = []
            for s in p.rhs:
                rhs.extend((s,) if g.is_nonterminal(s) else f(s))
            prods.append(Production(p.lhs, tuple(rhs)))
            continue
        if not p.rhs or g.is_nonterminal(p.rhs[0]):
            prods.append(p)
            continue
        image = f(p.rhs[0])
        tail = p.rhs[1:]
        if len(image) <= 1:
            prods.append(Production(p.lhs, tuple(image) + tail))
            continue
        lhs = p.lhs
        for s in image[:-1]:
            nxt = fresh_name(f"{p.lhs}_", taken)
            prods.append(Production(lhs, (s, nxt)))
            lhs = nxt
        prods.append(Production(lhs, (image[-1],) + tail))
    out = make_grammar(prods, g.start, nonterminals=taken)
    return validate_left_regular(out) if regular else out


def cfg_reverse(g: ContextFreeGrammar) -> ContextFreeGrammar:
    prods = tuple(Production(p.lhs, tuple(reversed(p.rhs))) for p in g.productions)
    return ContextFreeGrammar(g.nonterminals, g.terminals, g.start, prods)
