"""
Factory de formalismos: lee y escribe los formatos de texto de gramáticas,
sistemas ET0L y autómatas, y despacha por formalismo (inferido de la extensión).

Formato común: una declaración por línea, `//` inicia un comentario,
`eps` (o `ε`) denota la palabra vacía y `(a,.)` una letra de pares.
"""

import re
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from core.errors import FormatError, RelkitError, UnknownFormalism
from core.logger import get_logger
from core.words import (
    EMPTY_MARK, EMPTY_WORDS, EPS_TOKEN, SEPARATOR, PairLetter, Symbol,
    parse_word, symbol_key, tokenize,
)
from models.RelkitModels import CounterMode, Formalism, GrammarKind, Guard, PdaAcceptance
from services.automata_service import (
    CounterAutomaton, Nfa, PushdownAutomaton, Transducer,
    make_counter_automaton, make_nfa, make_pda, make_transducer,
)
from services.grammar_service import (
    ContextFreeGrammar, LeftRegularGrammar, Production, make_grammar, validate_left_regular,
)
from services.indexed_service import (
    IndexedGrammar, NonterminalRef, PartitionedIndexedGrammar,
    ig_validate_partitioned, indexed_production, make_indexed_grammar,
)
from services.lsystem_service import ET0LSystem, EDT0LWitness, make_table
from services.relation_service import formalism_of

logger = get_logger(__name__)

EXTENSIONS: Dict[str, Formalism] = {
    ".rg": Formalism.LEFT_REGULAR,
    ".cfg": Formalism.CFG,
    ".lig": Formalism.LIG,
    ".ig": Formalism.INDEXED,
    ".etol": Formalism.ET0L,
    ".nfa": Formalism.NFA,
    ".oca": Formalism.COUNTER,
    ".fst": Formalism.TRANSDUCER,
    ".pda": Formalism.PDA,
}

COMMENT = "//"

_HEADER_RE = re.compile(r"^(alphabet|start|flags|partition|nonterminals|axiom|mode|acceptance|bottom|stack)\s*:\s*(.*)$")
_TABLE_RE = re.compile(r"^table\s+(\S+?)\s*:\s*(.*)$")
_LHS_RE = re.compile(r"^([^\s\[\]+^]+)(?:\[([^\s\[\]]+)\])?$")
_DELTA_RE = re.compile(r"^[+-]\d+$")
_FST_RE = re.compile(r"^trans\s+(\S+)\s+\((.*),(.*)\)\s+(\S+)$")


# ================================
# LECTURA DE LÍNEAS
# ================================

class _Line(NamedTuple):
    number: int
    text: str


class _Reader:
    """Separa encabezados `clave: valor` del resto de las líneas"""

    def __init__(self, text: str, source: Optional[str] = None):
        self.source = source
        self.headers: Dict[str, _Line] = {}
        self.body: List[_Line] = []
        for i, raw in enumerate(text.splitlines(), start=1):
            line = raw.split(COMMENT, 1)[0].strip()
            if not line:
                continue
            m = _HEADER_RE.match(line)
            if m and "->" not in line:
                if m.group(1) in self.headers:
                    raise self.error(f"duplicate header {m.group(1)!r}", i)
                self.headers[m.group(1)] = _Line(i, m.group(2).strip())
            else:
                self.body.append(_Line(i, line))

    def error(self, detail: str, line: Optional[int] = None) -> FormatError:
        return FormatError(detail, line, self.source)

    def header(self, key: str, default: Optional[str] = None) -> Optional[str]:
        line = self.headers.get(key)
        return line.text if line else default

    def header_list(self, key: str) -> List[str]:
        value = self.header(key)
        return value.split() if value else []


def _symbol(token: str, symbols: Iterable[str]) -> Optional[Symbol]:
    """Un token de autómata: `eps`, una letra de pares o un símbolo"""
    if token in EMPTY_WORDS:
        return None
    parts = tokenize(token, symbols)
    if len(parts) == 1:
        return parts[0]
    return token


def _label(symbol: Optional[Symbol]) -> str:
    return EPS_TOKEN if symbol is None else str(symbol)


def _join(symbols: Sequence[Symbol]) -> str:
    return " ".join(str(s) for s in symbols) if symbols else EPS_TOKEN


def _compact(symbols: Sequence[str], sep: str = " ") -> str:
    if not symbols:
        return EMPTY_MARK
    return ("" if all(len(s) == 1 for s in symbols) else sep).join(symbols)


def _atomic_letters(terminals: Iterable[Symbol]) -> List[str]:
    letters: Set[str] = set()
    for t in terminals:
        if isinstance(t, PairLetter):
            letters.update(s for s in t if s)
        else:
            letters.add(t)
    letters.discard(SEPARATOR)
    return sorted(letters)


# ================================
# GRAMÁTICAS
# ================================

def _split_production(reader: _Reader, line: _Line) -> Tuple[str, Optional[str], List[str]]:
    head, _, body = line.text.partition("->")
    m = _LHS_RE.match(head.strip())
    if not m:
        raise reader.error(f"bad left-hand side {head.strip()!r}", line.number)
    return m.group(1), m.group(2), [alt.strip() for alt in body.split("|")]


def _parse_rhs(
    reader: _Reader, line: _Line, text: str, nonterminals: Set[str], symbols: Set[str], indexed: bool
) -> Tuple[List[Any], Optional[int]]:
    if text in EMPTY_WORDS:
        return [], None
    items: List[Any] = []
    linear: Optional[int] = None
    ordinal = 0
    known = symbols | nonterminals
    for chunk in text.split():
        if chunk in EMPTY_WORDS:
            continue
        head, *pushes = chunk.split("+")
        marked = head.startswith("^")
        if marked:
            head = head[1:]
        if (marked or pushes) and not indexed:
            raise reader.error(f"flags and linear marks need an indexed grammar: {chunk!r}", line.number)
        if any(not f for f in pushes):
            raise reader.error(f"empty flag in {chunk!r}", line.number)
        tokens = tokenize(head, known) if head else []
        for k, tok in enumerate(tokens):
            is_nt = isinstance(tok, str) and not isinstance(tok, PairLetter) and tok in nonterminals
            first, last = k == 0, k == len(tokens) - 1
            if (marked and first or pushes and last) and not is_nt:
                raise reader.error(f"{tok!r} is not a nonterminal in {chunk!r}", line.number)
            if not is_nt:
                items.append(tok)
            elif indexed:
                items.append(NonterminalRef(tok, tuple(pushes) if last else ()))
                if marked and first:
                    linear = ordinal
                ordinal += 1
            else:
                items.append(tok)
    return items, linear


def parse_grammar(text: str, formalism: Formalism, source: Optional[str] = None) -> Any:
    """CFG, gramática regular a izquierda, lineal indexada o indexada"""
    reader = _Reader(text, source)
    indexed = formalism in (Formalism.LIG, Formalism.INDEXED)
    rows = [(line, *_split_production(reader, line)) for line in reader.body if "->" in line.text]
    for line in reader.body:
        if "->" not in line.text:
            raise reader.error(f"expected a production: {line.text!r}", line.number)
    if not rows:
        raise reader.error("grammar has no productions")
    nonterminals = set(reader.header_list("nonterminals")) | {lhs for _, lhs, _, _ in rows}
    symbols = set(reader.header_list("alphabet"))
    start = reader.header("start") or rows[0][1]
    flags = reader.header_list("flags")

    if not indexed:
        if any(flag for _, _, flag, _ in rows):
            raise reader.error("consumed flags need an indexed grammar")
        prods = []
        for line, lhs, _, alts in rows:
            for alt in alts:
                rhs, _ = _parse_rhs(reader, line, alt, nonterminals, symbols, False)
                prods.append(Production(lhs, tuple(rhs)))
        try:
            g = make_grammar(prods, start, terminals=symbols, nonterminals=nonterminals)
            return validate_left_regular(g) if formalism == Formalism.LEFT_REGULAR else g
        except RelkitError as e:
            raise reader.error(e.detail)

    prods = []
    for line, lhs, flag, alts in rows:
        for alt in alts:
            rhs, linear = _parse_rhs(reader, line, alt, nonterminals, symbols, True)
            prods.append(indexed_production(lhs, rhs, consumed_flag=flag, linear_child=linear))
    kind = GrammarKind.LINEAR_INDEXED if formalism == Formalism.LIG else None
    try:
        g = make_indexed_grammar(prods, start, terminals=symbols, flags=flags, nonterminals=nonterminals, kind=kind)
    except RelkitError as e:
        raise reader.error(e.detail)
    partition = reader.header("partition")
    if partition is None:
        return g
    parts = [p.split() for p in partition.split("|")]
    if len(parts) != 3:
        raise reader.error("partition needs three parts: N_L | N_# | N_R", reader.headers["partition"].number)
    return ig_validate_partitioned(g, *parts)


def _grammar_lines(
    start: str, terminals: Iterable[Symbol], lines: List[Tuple[str, str]], extra: Sequence[str] = ()
) -> str:
    out = []
    letters = _atomic_letters(terminals)
    if letters:
        out.append("alphabet: " + " ".join(letters))
    out.append(f"start: {start}")
    out.extend(extra)
    # el símbolo inicial primero; el resto en orden estable
    out.extend(body for _, body in sorted(lines, key=lambda kv: (kv[0] != start, kv[1])))
    return "\n".join(out) + "\n"


def emit_grammar(g: Union[ContextFreeGrammar, IndexedGrammar, PartitionedIndexedGrammar]) -> str:
    if isinstance(g, PartitionedIndexedGrammar):
        parts = " | ".join(" ".join(sorted(p)) for p in (g.n_left, g.n_hash, g.n_right))
        return _emit_indexed(g.grammar, [f"partition: {parts}"])
    if isinstance(g, IndexedGrammar):
        return _emit_indexed(g, [])
    lines = [(p.lhs, f"{p.lhs} -> {_join(p.rhs)}") for p in g.productions]
    return _grammar_lines(g.start, g.terminals, lines)


def _emit_indexed(g: IndexedGrammar, extra: List[str]) -> str:
    flags = sorted(g.flags)
    header = ([f"flags: {' '.join(flags)}"] if flags else []) + extra
    lines = [(p.lhs, str(p)) for p in g.productions]
    return _grammar_lines(g.start, g.terminals, lines, header)


# ================================
# SISTEMAS ET0L
# ================================

def parse_etol(text: str, source: Optional[str] = None) -> ET0LSystem:
    """Los no terminales omitidos en una tabla se reescriben por sí mismos"""
    reader = _Reader(text, source)
    tables_raw: List[Tuple[_Line, str, List[Tuple[str, List[str]]]]] = []
    nonterminals = set(reader.header_list("nonterminals"))
    for line in reader.body:
        m = _TABLE_RE.match(line.text)
        if not m:
            raise reader.error(f"expected a table line: {line.text!r}", line.number)
        rules = []
        for rule in m.group(2).split(";"):
            rule = rule.strip()
            if not rule:
                continue
            head, arrow, body = rule.partition("->")
            if not arrow or not head.strip():
                raise reader.error(f"bad rule {rule!r}", line.number)
            rules.append((head.strip(), [alt.strip() for alt in body.split("|")]))
            nonterminals.add(head.strip())
        tables_raw.append((line, m.group(1), rules))
    if not tables_raw:
        raise reader.error("an ET0L system needs at least one table")
    axiom_text = reader.header("axiom")
    if axiom_text is None:
        raise reader.error("missing axiom")
    symbols = set(reader.header_list("alphabet"))
    known = symbols | nonterminals

    def form(chunk: str) -> Tuple[Symbol, ...]:
        if chunk in EMPTY_WORDS:
            return ()
        return tuple(s for part in chunk.split() for s in tokenize(part, known))

    tables = []
    terminals: Set[Symbol] = set(symbols)
    axiom = form(axiom_text)
    for line, name, rules in tables_raw:
        mapping: Dict[Symbol, List[Tuple[Symbol, ...]]] = {}
        for head, alts in rules:
            mapping.setdefault(head, []).extend(form(a) for a in alts)
        for options in mapping.values():
            for o in options:
                terminals.update(s for s in o if s not in nonterminals)
        try:
            tables.append(make_table(name, mapping, nonterminals, fill_identity=True))
        except RelkitError as e:
            raise reader.error(e.detail, line.number)
    terminals.update(s for s in axiom if s not in nonterminals)
    try:
        return ET0LSystem(frozenset(nonterminals), frozenset(terminals), axiom, tuple(tables))
    except RelkitError as e:
        raise reader.error(e.detail)


def emit_etol(sys: Union[ET0LSystem, EDT0LWitness]) -> str:
    if isinstance(sys, EDT0LWitness):
        sys = sys.system
    out = []
    letters = _atomic_letters(sys.terminals)
    if letters:
        out.append("alphabet: " + " ".join(letters))
    out.append("nonterminals: " + " ".join(sorted(sys.nonterminals, key=symbol_key)))
    out.append(f"axiom: {_join(sys.axiom)}")
    for t in sys.tables:
        rules = []
        for symbol, options in t.rules:
            if symbol in t.implicit or symbol not in sys.nonterminals:
                continue
            rules.append(f"{symbol} -> " + " | ".join(_join(o) for o in options))
        out.append(f"table {t.name}: " + " ; ".join(rules))
    return "\n".join(out) + "\n"


# ================================
# AUTÓMATAS
# ================================

def _states(reader: _Reader) -> Tuple[Set[str], Set[str], Set[str], List[_Line]]:
    states: Set[str] = set()
    initial: Set[str] = set()
    finals: Set[str] = set()
    transitions: List[_Line] = []
    for line in reader.body:
        words = line.text.split()
        if words[0] == "state":
            if len(words) < 2:
                raise reader.error("state line needs a name", line.number)
            name, flags = words[1], words[2:]
            unknown = set(flags) - {"initial", "final"}
            if unknown:
                raise reader.error(f"unknown state attribute {sorted(unknown)[0]!r}", line.number)
            states.add(name)
            if "initial" in flags:
                initial.add(name)
            if "final" in flags:
                finals.add(name)
        elif words[0] == "trans":
            transitions.append(line)
        else:
            raise reader.error(f"expected `state` or `trans`: {line.text!r}", line.number)
    if not initial:
        raise reader.error("no initial state")
    return states, initial, finals, transitions


def parse_nfa(text: str, source: Optional[str] = None) -> Nfa:
    reader = _Reader(text, source)
    symbols = reader.header_list("alphabet")
    states, initial, finals, lines = _states(reader)
    trans = []
    for line in lines:
        words = line.text.split()
        if len(words) != 4:
            raise reader.error("expected `trans SOURCE SYMBOL TARGET`", line.number)
        trans.append((words[1], _symbol(words[2], symbols), words[3]))
    try:
        return make_nfa(trans, initial, finals, alphabet=symbols, states=states)
    except RelkitError as e:
        raise reader.error(e.detail)


def parse_oca(text: str, source: Optional[str] = None) -> CounterAutomaton:
    """`trans q0 x +1 q1`; la guarda `=0` va antes del incremento, que por defecto es 0"""
    reader = _Reader(text, source)
    symbols = reader.header_list("alphabet")
    try:
        mode = CounterMode(reader.header("mode", CounterMode.BLIND.value))
    except ValueError:
        raise reader.error(f"unknown counter mode {reader.header('mode')!r}", reader.headers["mode"].number)
    states, initial, finals, lines = _states(reader)
    trans = []
    for line in lines:
        words = line.text.split()
        if len(words) < 4:
            raise reader.error("expected `trans SOURCE SYMBOL [=0] [DELTA] TARGET`", line.number)
        src, sym, middle, tgt = words[1], words[2], words[3:-1], words[-1]
        guard = Guard.NONE
        delta = 0
        for tok in middle:
            if tok == "=0" and guard == Guard.NONE:
                guard = Guard.ZERO
            elif _DELTA_RE.match(tok):
                delta = int(tok)
            else:
                raise reader.error(f"bad counter operation {tok!r}", line.number)
        trans.append((src, _symbol(sym, symbols), guard, delta, tgt))
    try:
        return make_counter_automaton(trans, initial, finals, mode, alphabet=symbols, states=states)
    except RelkitError as e:
        raise reader.error(e.detail)


def parse_fst(text: str, source: Optional[str] = None) -> Transducer:
    reader = _Reader(text, source)
    symbols = reader.header_list("alphabet")
    _, initial, finals, lines = _states(reader)
    trans = []
    for line in lines:
        m = _FST_RE.match(line.text)
        if not m:
            raise reader.error("expected `trans SOURCE (u,v) TARGET`", line.number)
        u, v = (() if side.strip() in EMPTY_WORDS | {EMPTY_MARK} else parse_word(side, symbols) for side in m.group(2, 3))
        trans.append((m.group(1), (u, v), m.group(4)))
    try:
        return make_transducer(trans, initial, finals, alphabet=symbols)
    except RelkitError as e:
        raise reader.error(e.detail)


def _stack_word(value: str, stack: Sequence[str]) -> Tuple[str, ...]:
    if value in EMPTY_WORDS:
        return ()
    if "," in value:
        return tuple(s for s in value.split(",") if s)
    return tuple(str(s) for s in tokenize(value, stack))


def parse_pda(text: str, source: Optional[str] = None) -> PushdownAutomaton:
    """`trans q0 a top=A push=BA q1`; sin `top=` no se desapila, sin `push=` no se apila"""
    reader = _Reader(text, source)
    symbols = reader.header_list("alphabet")
    stack = reader.header_list("stack")
    bottom = reader.header("bottom")
    try:
        acceptance = PdaAcceptance(reader.header("acceptance", PdaAcceptance.EMPTY_STACK.value))
    except ValueError:
        raise reader.error(f"unknown acceptance {reader.header('acceptance')!r}", reader.headers["acceptance"].number)
    _, initial, finals, lines = _states(reader)
    if len(initial) != 1:
        raise reader.error("a pushdown automaton has exactly one initial state")
    known = stack + ([bottom] if bottom else [])
    trans = []
    for line in lines:
        words = line.text.split()
        if len(words) < 4:
            raise reader.error("expected `trans SOURCE SYMBOL [top=X] [push=W] TARGET`", line.number)
        top: Optional[str] = None
        push: Tuple[str, ...] = ()
        for tok in words[3:-1]:
            key, eq, value = tok.partition("=")
            if not eq or key not in ("top", "push"):
                raise reader.error(f"bad stack operation {tok!r}", line.number)
            if key == "top":
                top = None if value in EMPTY_WORDS else value
            else:
                push = _stack_word(value, known)
        trans.append((words[1], _symbol(words[2], symbols), top, push, words[-1]))
    try:
        return make_pda(
            trans, next(iter(initial)), finals, acceptance, bottom, alphabet=symbols, stack_alphabet=stack,
        )
    except RelkitError as e:
        raise reader.error(e.detail)


def _automaton_lines(
    alphabet: Iterable[Symbol], states: Iterable[str], initial: Iterable[str], finals: Iterable[str],
    transitions: List[str], extra: Sequence[str] = (),
) -> str:
    out = []
    letters = sorted((s for s in alphabet if not isinstance(s, PairLetter)), key=symbol_key)
    if letters:
        out.append("alphabet: " + " ".join(letters))
    out.extend(extra)
    initial, finals = set(initial), set(finals)
    for q in sorted(states, key=lambda q: (q not in initial, q)):
        attrs = [a for a, on in (("initial", q in initial), ("final", q in finals)) if on]
        out.append(" ".join(["state", q] + attrs))
    out.extend(sorted(transitions))
    return "\n".join(out) + "\n"


def emit_automaton(a: Union[Nfa, CounterAutomaton, Transducer, PushdownAutomaton]) -> str:
    if isinstance(a, Nfa):
        lines = [f"trans {t.source} {_label(t.symbol)} {t.target}" for t in a.transitions]
        return _automaton_lines(a.alphabet, a.states, a.initial, a.finals, lines)
    if isinstance(a, CounterAutomaton):
        lines = []
        for t in a.transitions:
            guard = " =0" if t.guard == Guard.ZERO else ""
            lines.append(f"trans {t.source} {_label(t.symbol)}{guard} {t.delta:+d} {t.target}")
        return _automaton_lines(a.alphabet, a.states, a.initial, a.finals, lines, [f"mode: {a.mode.value}"])
    if isinstance(a, Transducer):
        lines = [
            f"trans {t.source} ({_compact(t.label[0])},{_compact(t.label[1])}) {t.target}"
            for t in a.transitions
        ]
        return _automaton_lines(a.alphabet, a.states, a.initial, a.finals, lines)
    if isinstance(a, PushdownAutomaton):
        lines = []
        for t in a.transitions:
            ops = []
            if t.top is not None:
                ops.append(f"top={t.top}")
            if t.push:
                ops.append("push=" + _compact(t.push, sep=","))
            lines.append(" ".join(["trans", t.source, _label(t.symbol)] + ops + [t.target]))
        extra = [f"acceptance: {a.acceptance.value}"]
        extra.append("stack: " + " ".join(sorted(a.stack_alphabet)))
        if a.bottom:
            extra.append(f"bottom: {a.bottom}")
        return _automaton_lines(a.alphabet, a.states, {a.initial}, a.finals, lines, extra)
    raise UnknownFormalism(f"cannot emit {type(a).__name__}")


# ================================
# FACTORY
# ================================

class FormalismFactory:
    """Factory para leer y escribir gramáticas, sistemas y autómatas"""

    _parsers: Dict[Formalism, Callable[[str, Optional[str]], Any]] = {
        Formalism.LEFT_REGULAR: lambda text, src: parse_grammar(text, Formalism.LEFT_REGULAR, src),
        Formalism.CFG: lambda text, src: parse_grammar(text, Formalism.CFG, src),
        Formalism.LIG: lambda text, src: parse_grammar(text, Formalism.LIG, src),
        Formalism.INDEXED: lambda text, src: parse_grammar(text, Formalism.INDEXED, src),
        Formalism.ET0L: parse_etol,
        Formalism.NFA: parse_nfa,
        Formalism.COUNTER: parse_oca,
        Formalism.TRANSDUCER: parse_fst,
        Formalism.PDA: parse_pda,
    }

    @staticmethod
    def create(formalism: Union[Formalism, str], text: str, source: Optional[str] = None) -> Any:
        """
        Crea el objeto descrito por `text`

        Args:
            formalism: formalismo o su nombre corto (cfg, lig, oca, ...)
            text: contenido en el formato de texto del formalismo
            source: nombre del archivo, para los mensajes de error
        """
        try:
            formalism = Formalism(formalism)
        except ValueError:
            raise UnknownFormalism(f"unsupported formalism {formalism!r}")
        obj = FormalismFactory._parsers[formalism](text, source)
        logger.debug("parsed %s from %s", formalism.value, source or "<text>")
        return obj

    @staticmethod
    def formalism_for_path(path: Union[str, Path]) -> Formalism:
        suffix = Path(path).suffix.lower()
        if suffix not in EXTENSIONS:
            raise UnknownFormalism(f"cannot infer the formalism of {str(path)!r}; use --formalism")
        return EXTENSIONS[suffix]

    @staticmethod
    def load(path: Union[str, Path], formalism: Optional[Union[Formalism, str]] = None) -> Any:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise FormatError(f"cannot read file: {e.strerror}", source=str(path))
        formalism = formalism or FormalismFactory.formalism_for_path(path)
        return FormalismFactory.create(formalism, text, str(path))

    @staticmethod
    def emit(obj: Any) -> str:
        """Texto del objeto, legible de vuelta por `create`"""
        if isinstance(obj, (ContextFreeGrammar, IndexedGrammar, PartitionedIndexedGrammar)):
            return emit_grammar(obj)
        if isinstance(obj, (ET0LSystem, EDT0LWitness)):
            return emit_etol(obj)
        return emit_automaton(obj)

    @staticmethod
    def extension_for(obj: Any) -> str:
        formalism = formalism_of(obj)
        if isinstance(obj, ContextFreeGrammar) and not isinstance(obj, LeftRegularGrammar):
            formalism = Formalism.CFG
        return next(ext for ext, f in EXTENSIONS.items() if f == formalism)

    @staticmethod
    def get_supported_types() -> List[str]:
        return [f.value for f in Formalism]
