"""
Alfabetos, palabras y las dos codificaciones de una relación binaria:
la de dos cintas (proyección π de palabras de pares) y la desplegada (u#v^rev).
Las muestras acotadas de relación son la moneda de comparación de todo el paquete.
"""

import itertools
import re
from typing import (
    Any, Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List,
    Mapping, NamedTuple, Optional, Protocol, Sequence, Set, Tuple, Union,
)

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.errors import BoundMismatch, FoldError, FormatError
from models.RelkitModels import SampleComparison, Viewpoint, WordSetComparison

SEPARATOR = "#"
EPS_TOKEN = "eps"
EMPTY_MARK = "."
EMPTY_WORDS = {"", EPS_TOKEN, "ε"}
RESERVED = {SEPARATOR, EPS_TOKEN, EMPTY_MARK}


class PairLetter(NamedTuple):
    """Letra del alfabeto de pares; "" representa ε en una componente"""
    left: str
    right: str

    def __str__(self) -> str:
        return f"({self.left or EMPTY_MARK},{self.right or EMPTY_MARK})"


Symbol = Union[str, PairLetter]
Word = Tuple[str, ...]
PairWord = Tuple[PairLetter, ...]
Pair = Tuple[Word, Word]
Homomorphism = Mapping[Symbol, Tuple[Symbol, ...]]


def pair_letter(left: str, right: str) -> PairLetter:
    if not left and not right:
        raise ValueError("(ε,ε) is not a pair letter")
    return PairLetter(left, right)


def is_pair(symbol: Any) -> bool:
    return isinstance(symbol, PairLetter)


class Alphabet(BaseModel):
    """Alfabeto finito ordenado de símbolos atómicos"""
    model_config = ConfigDict(frozen=True)

    symbols: Tuple[str, ...]

    @field_validator("symbols")
    @classmethod
    def _check_symbols(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if len(set(value)) != len(value):
            raise ValueError("alphabet symbols must be unique")
        for s in value:
            if not s or any(ch.isspace() for ch in s):
                raise ValueError(f"invalid symbol {s!r}")
            if s in RESERVED or "(" in s or ")" in s or "," in s:
                raise ValueError(f"reserved symbol {s!r}")
        return value

    def __contains__(self, symbol: object) -> bool:
        return symbol in self.symbols

    def __len__(self) -> int:
        return len(self.symbols)

    def words(self, maxlen: int) -> Iterator[Word]:
        return all_words(self.symbols, maxlen)

    def pair_letters(self) -> List[PairLetter]:
        """Todas las letras de X²_ε salvo (ε,ε)"""
        side = ("",) + self.symbols
        return [PairLetter(a, b) for a in side for b in side if a or b]


# ================================
# ORDEN CANÓNICO Y FORMATO
# ================================

def symbol_key(symbol: Symbol) -> Tuple[int, str, str]:
    if isinstance(symbol, PairLetter):
        return (1, symbol.left, symbol.right)
    return (0, str(symbol), "")


def word_key(word: Sequence[Symbol]) -> Tuple[int, Tuple[Tuple[int, str, str], ...]]:
    return (len(word), tuple(symbol_key(s) for s in word))


def pair_key(pair: Pair) -> Tuple[Any, Any]:
    return (word_key(pair[0]), word_key(pair[1]))


def sort_words(words: Iterable[Sequence[Symbol]]) -> List[Tuple[Symbol, ...]]:
    return sorted((tuple(w) for w in words), key=word_key)


def format_symbol(symbol: Symbol) -> str:
    return str(symbol)


def format_word(word: Sequence[Symbol]) -> str:
    if not word:
        return "ε"
    compact = all(
        (isinstance(s, PairLetter) and len(s.left) <= 1 and len(s.right) <= 1)
        or (not isinstance(s, PairLetter) and len(s) == 1)
        for s in word
    )
    return ("" if compact else " ").join(format_symbol(s) for s in word)


_PAIR_RE = re.compile(r"\(([^(),\s]*),([^(),\s]*)\)")


def _side(token: str) -> str:
    return "" if token in (EMPTY_MARK, EPS_TOKEN, "", "ε") else token


def tokenize(chunk: str, symbols: Optional[Iterable[str]] = None) -> List[Symbol]:
    """Parte un trozo sin espacios en símbolos: pares `(a,.)`, coincidencia
    más larga sobre los símbolos conocidos, y si no, un carácter"""
    ordered = sorted(set(symbols or ()), key=len, reverse=True)
    out: List[Symbol] = []
    i = 0
    while i < len(chunk):
        if chunk[i] == "(":
            m = _PAIR_RE.match(chunk, i)
            if not m:
                raise FormatError(f"bad pair token in {chunk!r}")
            try:
                out.append(pair_letter(_side(m.group(1)), _side(m.group(2))))
            except ValueError as e:
                raise FormatError(str(e))
            i = m.end()
            continue
        for s in ordered:
            if chunk.startswith(s, i):
                out.append(s)
                i += len(s)
                break
        else:
            out.append(chunk[i])
            i += 1
    return out


def parse_word(text: str, symbols: Optional[Iterable[str]] = None) -> Tuple[Symbol, ...]:
    """Lee una palabra: símbolos de un carácter pegados, o separados por espacios"""
    stripped = text.strip()
    if stripped in EMPTY_WORDS:
        return ()
    chunks = stripped.split()
    if symbols is None and len(chunks) > 1:
        out: List[Symbol] = []
        for chunk in chunks:
            if chunk.startswith("("):
                out.extend(tokenize(chunk))
            else:
                out.append(chunk)
        return tuple(out)
    return tuple(s for chunk in chunks for s in tokenize(chunk, symbols))


# ================================
# CODIFICACIONES
# ================================

def pi_project(word: Sequence[PairLetter]) -> Pair:
    """π: concatenación por componentes"""
    left = tuple(letter.left for letter in word if letter.left)
    right = tuple(letter.right for letter in word if letter.right)
    return left, right


def unfold(u: Sequence[str], v: Sequence[str]) -> Word:
    return tuple(u) + (SEPARATOR,) + tuple(reversed(tuple(v)))


def fold(word: Sequence[str]) -> Pair:
    word = tuple(word)
    if word.count(SEPARATOR) != 1:
        raise FoldError(word)
    i = word.index(SEPARATOR)
    return word[:i], tuple(reversed(word[i + 1:]))


def reverse_word(word: Sequence[Symbol]) -> Tuple[Symbol, ...]:
    return tuple(reversed(tuple(word)))


def image_word(word: Sequence[Symbol], h: Homomorphism) -> Tuple[Symbol, ...]:
    """Imagen homomórfica; los símbolos fuera de h quedan fijos"""
    out: List[Symbol] = []
    for s in word:
        out.extend(h.get(s, (s,)))
    return tuple(out)


def all_words(symbols: Sequence[Symbol], maxlen: int) -> Iterator[Tuple[Symbol, ...]]:
    """Todas las palabras de longitud ≤ maxlen, en orden longitud-lexicográfico"""
    ordered = sorted(symbols, key=symbol_key)
    for n in range(maxlen + 1):
        yield from itertools.product(ordered, repeat=n)


# ================================
# COTAS SEGÚN EL PUNTO DE VISTA
# ================================

Counts = Tuple[int, int, int]


class LengthBudget:
    """Cota de longitud de un enumerador.

    plain: longitud total ≤ bound.
    two-tape: cada componente de π ≤ bound.
    unfolded: cada lado de `#` ≤ bound, con exactamente un `#`.
    """

    def __init__(self, viewpoint: Viewpoint, bound: int):
        if bound < 0:
            raise ValueError("bound must be non-negative")
        self.viewpoint = Viewpoint(viewpoint)
        self.bound = bound

    @property
    def capacity(self) -> int:
        """Máximo número de símbolos de una palabra admitida"""
        if self.viewpoint == Viewpoint.TWO_TAPE:
            return 2 * self.bound
        if self.viewpoint == Viewpoint.UNFOLDED:
            return 2 * self.bound + 1
        return self.bound

    def weight(self, symbol: Symbol) -> Tuple[int, int]:
        if self.viewpoint == Viewpoint.TWO_TAPE and isinstance(symbol, PairLetter):
            return (1 if symbol.left else 0, 1 if symbol.right else 0)
        return (1, 0)

    def limits(self) -> Tuple[int, int]:
        if self.viewpoint == Viewpoint.TWO_TAPE:
            return (self.bound, self.bound)
        return (self.capacity, 0)

    def start(self) -> Counts:
        return (0, 0, 0)

    def step(self, counts: Counts, symbol: Symbol) -> Optional[Counts]:
        """Avanza un símbolo; None si la cota se excede"""
        left, right, hashes = counts
        if self.viewpoint == Viewpoint.UNFOLDED:
            if symbol == SEPARATOR:
                hashes += 1
                if hashes > 1:
                    return None
            elif hashes:
                right += 1
            else:
                left += 1
            if left > self.bound or right > self.bound:
                return None
            return (left, right, hashes)
        dl, dr = self.weight(symbol)
        left, right = left + dl, right + dr
        if self.viewpoint == Viewpoint.TWO_TAPE:
            if left > self.bound or right > self.bound:
                return None
        elif left > self.bound:
            return None
        return (left, right, hashes)

    def admits(self, word: Sequence[Symbol]) -> bool:
        counts: Optional[Counts] = self.start()
        for s in word:
            counts = self.step(counts, s)
            if counts is None:
                return False
        if self.viewpoint == Viewpoint.UNFOLDED:
            return counts[2] == 1
        return True

    def admits_form(self, form: Sequence[Any], is_terminal: Callable[[Any], bool]) -> bool:
        """Cota inferior para formas sentenciales (terminales ya fijados)"""
        if self.viewpoint != Viewpoint.UNFOLDED:
            counts: Optional[Counts] = self.start()
            for item in form:
                if is_terminal(item):
                    counts = self.step(counts, item)
                    if counts is None:
                        return False
            return True
        terminals = [i for i, item in enumerate(form) if is_terminal(item)]
        hashes = [i for i in terminals if form[i] == SEPARATOR]
        if len(hashes) > 1:
            return False
        if len(terminals) - len(hashes) > 2 * self.bound:
            return False
        if hashes:
            h = hashes[0]
            before = sum(1 for i in terminals if i < h)
            after = len(terminals) - before - 1
            return before <= self.bound and after <= self.bound
        nts = [i for i, item in enumerate(form) if not is_terminal(item)]
        if not nts:
            return False
        lead = sum(1 for i in terminals if i < nts[0])
        tail = sum(1 for i in terminals if i > nts[-1])
        return lead <= self.bound and tail <= self.bound


# ================================
# MUESTRAS DE RELACIÓN
# ================================

class WordAcceptor(Protocol):
    def accepts(self, word: Sequence[Symbol]) -> bool: ...


class RelationSample(BaseModel):
    """Conjunto finito de pares con ambas componentes de longitud ≤ bound"""
    model_config = ConfigDict(frozen=True)

    bound: int = Field(ge=0)
    pairs: FrozenSet[Tuple[Tuple[str, ...], Tuple[str, ...]]] = frozenset()

    @model_validator(mode="after")
    def _check_lengths(self) -> "RelationSample":
        for u, v in self.pairs:
            if len(u) > self.bound or len(v) > self.bound:
                raise ValueError(f"pair exceeds bound {self.bound}: {(u, v)}")
        return self

    @classmethod
    def truncated(cls, bound: int, pairs: Iterable[Tuple[Sequence[str], Sequence[str]]]) -> "RelationSample":
        """Construye la muestra descartando los pares que exceden la cota"""
        kept = frozenset(
            (tuple(u), tuple(v)) for u, v in pairs if len(u) <= bound and len(v) <= bound
        )
        return cls(bound=bound, pairs=kept)

    @property
    def size(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def sorted_pairs(self) -> List[Pair]:
        return sorted(self.pairs, key=pair_key)

    def restrict_bound(self, bound: int) -> "RelationSample":
        return RelationSample.truncated(bound, self.pairs)

    def image(self, h: Homomorphism) -> "RelationSample":
        """Imagen por h en ambas componentes, truncada a la misma cota"""
        return RelationSample.truncated(
            self.bound, ((image_word(u, h), image_word(v, h)) for u, v in self.pairs)
        )

    def to_text(self) -> str:
        return "".join(f"{format_word(u)}\t{format_word(v)}\n" for u, v in self.sorted_pairs())


def sample_equal(a: RelationSample, b: RelationSample) -> SampleComparison:
    if a.bound != b.bound:
        raise BoundMismatch(a.bound, b.bound)
    only_a = sorted(a.pairs - b.pairs, key=pair_key)
    only_b = sorted(b.pairs - a.pairs, key=pair_key)
    return SampleComparison(
        equal=not only_a and not only_b,
        bound=a.bound,
        first_size=a.size,
        second_size=b.size,
        only_in_first=only_a,
        only_in_second=only_b,
    )


def sample_restrict(s: RelationSample, first: WordAcceptor, second: WordAcceptor) -> RelationSample:
    return RelationSample(
        bound=s.bound,
        pairs=frozenset((u, v) for u, v in s.pairs if first.accepts(u) and second.accepts(v)),
    )


def compare_word_sets(
    a: Iterable[Sequence[Symbol]], b: Iterable[Sequence[Symbol]], bound: int
) -> WordSetComparison:
    set_a = {tuple(w) for w in a}
    set_b = {tuple(w) for w in b}
    return WordSetComparison(
        equal=set_a == set_b,
        bound=bound,
        first_size=len(set_a),
        second_size=len(set_b),
        only_in_first=[format_word(w) for w in sort_words(set_a - set_b)],
        only_in_second=[format_word(w) for w in sort_words(set_b - set_a)],
    )


def sample_from_words(
    words: Iterable[Sequence[Symbol]], viewpoint: Viewpoint, bound: int
) -> RelationSample:
    """Convierte palabras (de pares o desplegadas) en la relación que codifican"""
    viewpoint = Viewpoint(viewpoint)
    if viewpoint == Viewpoint.TWO_TAPE:
        pairs = (pi_project(w) for w in words)
    elif viewpoint == Viewpoint.UNFOLDED:
        pairs = (fold(w) for w in words)
    else:
        raise ValueError("a relation needs the two-tape or unfolded viewpoint")
    return RelationSample.truncated(bound, pairs)


# ================================
# ORÁCULOS DE FUERZA BRUTA
# ================================

def sample_from_function(
    domain: Iterable[Word], f: Callable[[Word], Optional[Word]], bound: int
) -> RelationSample:
    """Muestra de una función parcial: pares (u, f(u))"""
    pairs = []
    for u in domain:
        v = f(tuple(u))
        if v is not None:
            pairs.append((tuple(u), tuple(v)))
    return RelationSample.truncated(bound, pairs)


def sample_from_classifier(
    words: Iterable[Word], key: Callable[[Word], Hashable], bound: int
) -> RelationSample:
    """Muestra de una equivalencia dada por un invariante: todos los pares de cada clase"""
    classes: Dict[Hashable, List[Word]] = {}
    for w in words:
        if len(w) <= bound:
            classes.setdefault(key(tuple(w)), []).append(tuple(w))
    pairs: Set[Pair] = set()
    for members in classes.values():
        for u in members:
            for v in members:
                pairs.add((u, v))
    return RelationSample(bound=bound, pairs=frozenset(pairs))


def sample_from_decider(
    first: Iterable[Word], second: Iterable[Word], decider: Callable[[Word, Word], bool], bound: int
) -> RelationSample:
    second_words = [tuple(v) for v in second if len(v) <= bound]
    pairs = [
        (tuple(u), v)
        for u in first if len(u) <= bound
        for v in second_words
        if decider(tuple(u), v)
    ]
    return RelationSample.truncated(bound, pairs)
