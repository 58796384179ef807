"""
Zoo de relaciones: cada entrada reúne un oráculo de fuerza bruta con las
gramáticas, sistemas y autómatas que deben reproducirlo.

Los nombres admiten un parámetro entre paréntesis: `rho_f(3)`, `sort_o(4)`,
`wp_M_rho(lin_triple)`, `wp_M_L(abc)`.
"""

import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from core.config import settings
from core.errors import ShapeViolation, UnknownZooEntry
from core.logger import get_logger
from core.words import (
    SEPARATOR, PairLetter, RelationSample, Word, all_words, pair_letter,
    sample_equal, sample_from_classifier, sample_from_decider, sample_from_function,
)
from models.RelkitModels import (
    CounterMode, Guard, PdaAcceptance, RepresentationCheck, Viewpoint,
    ZooCheckReport, ZooEntrySummary,
)
from services.automata_service import (
    CounterAutomaton, Nfa, PushdownAutomaton, Transducer,
    make_counter_automaton, make_nfa, make_pda, make_transducer, nfa_enumerate,
)
from services.grammar_service import ContextFreeGrammar, Production, make_grammar, validate_left_regular
from services.indexed_service import (
    BOTTOM, IndexedGrammar, IndexedProduction, NonterminalRef, PartitionedIndexedGrammar,
    ig_validate_partitioned, indexed_production, make_indexed_grammar,
)
from services.lsystem_service import ET0LSystem, EDT0LWitness, edt0l_validate, make_table
from services.monoid_service import FREE_GROUP_INVERSES, BlockCongruence, free_reduce, signed_count
from services.relation_service import formalism_of, relation_sample
from services.transform_service import (
    diagonal_grammar, monoid_two_tape_wp, monoid_unfolded_wp_indexed,
    substitute_terminals, two_tape_edt0l_to_unfolded, unary_transducer_to_unfolded_oca,
)

logger = get_logger(__name__)

P = PairLetter


def _ref(name: str, *pushes: str) -> NonterminalRef:
    return NonterminalRef(name, tuple(pushes))


def _cfg(rules: Iterable[Tuple[str, Sequence[Any]]], start: str = "S") -> ContextFreeGrammar:
    return make_grammar((Production(lhs, tuple(rhs)) for lhs, rhs in rules), start)


def _markers() -> Tuple[str, str]:
    return settings.LEFT_MARKER, settings.RIGHT_MARKER


# ================================
# GRAMÁTICAS Y SISTEMAS
# ================================

def rev_grammar(alphabet: Sequence[str] = ("a", "b")) -> ContextFreeGrammar:
    """S → (x,ε)S(ε,x) | ε"""
    rules = [("S", (pair_letter(x, ""), "S", pair_letter("", x))) for x in alphabet]
    return _cfg(rules + [("S", ())])


def rho_e_grammar() -> ContextFreeGrammar:
    return validate_left_regular(_cfg([("S", (P("x", "x"), "S")), ("S", ())]))


def rho_f_nfa(p: int = 2) -> Nfa:
    """xⁿ#xᵐ con m = n mod p: q cuenta módulo p y r descuenta tras #"""
    trans = []
    for i in range(p):
        trans.append((f"q{i}", "x", f"q{(i + 1) % p}"))
        trans.append((f"q{i}", SEPARATOR, f"r{i}"))
        if i:
            trans.append((f"r{i}", "x", f"r{i - 1}"))
    return make_nfa(trans, {"q0"}, {"r0"}, alphabet={"x", SEPARATOR})


def rho_f_transducer(p: int = 2) -> Transducer:
    trans = [(f"t{i}", (("x",), ()), f"t{(i + 1) % p}") for i in range(p)]
    trans += [(f"t{i}", ((), ("x",) * i), "f") for i in range(p)]
    return make_transducer(trans, {"t0"}, {"f"}, alphabet={"x"})


def rho_g_system() -> ET0LSystem:
    """Axioma A#B; la tabla 1 agrega 2n+1 letras a la derecha, la tabla 2 termina"""
    t1 = make_table("1", {"A": [("x", "A")], "B": [("x", "B", "C")], "C": [("x", "x", "C")]})
    t2 = make_table("2", {"A": [()], "B": [()], "C": [()]})
    return ET0LSystem(frozenset("ABC"), frozenset({"x", SEPARATOR}), ("A", SEPARATOR, "B"), (t1, t2))


def kappa_system(alphabet: Sequence[str] = ("a", "b")) -> ET0LSystem:
    nts = ("U", "V", "U'", "V'")
    tables = []
    for x in alphabet:
        tables.append(make_table(f"1{x}", {"U": [(x, "U")], "U'": [("U'", x)]}, nts, fill_identity=True))
        tables.append(make_table(f"2{x}", {"V": [(x, "V")], "V'": [("V'", x)]}, nts, fill_identity=True))
    tables.append(make_table("3", {a: [()] for a in nts}))
    return ET0LSystem(
        frozenset(nts), frozenset(alphabet) | {SEPARATOR}, ("U", "V", SEPARATOR, "U'", "V'"), tuple(tables)
    )


def kappa_lig(alphabet: Sequence[str] = ("a", "b")) -> PartitionedIndexedGrammar:
    """S → xS+x | A ; A → xAx | #B ; B[x] → xB ; B[$] → ε"""
    prods = [indexed_production("S", (x, _ref("S", x))) for x in alphabet]
    prods.append(indexed_production("S", (_ref("A"),)))
    prods += [indexed_production("A", (x, _ref("A"), x)) for x in alphabet]
    prods.append(indexed_production("A", (SEPARATOR, _ref("B"))))
    prods += [indexed_production("B", (x, _ref("B")), consumed_flag=x) for x in alphabet]
    prods.append(indexed_production("B", (), consumed_flag=BOTTOM))
    g = make_indexed_grammar(prods, "S", flags=set(alphabet) | {BOTTOM})
    return ig_validate_partitioned(g, (), ("S", "A"), ("B",))


def sort_letters(n: int) -> Tuple[str, ...]:
    return tuple(str(i) for i in range(1, n + 1))


def sort_key(w: Word) -> Word:
    return tuple(sorted(w, key=int))


def sort_cfg(n: int = 2) -> ContextFreeGrammar:
    """S → (1,1)S | (2,ε)S(ε,2) | ε"""
    if n > 2:
        raise ShapeViolation(n, "the context-free sort grammar covers n <= 2")
    rules = [("S", (P("1", "1"), "S")), ("S", ())]
    if n == 2:
        rules.append(("S", (pair_letter("2", ""), "S", pair_letter("", "2"))))
    return _cfg(rules)


def sort_lig_unfolded(n: int = 3) -> PartitionedIndexedGrammar:
    """S → 1S1 | 2S+2 | 3S+3 | #T ; T[2] → T2 ; T[3] → 3T ; T[$] → ε"""
    if n > 3:
        raise ShapeViolation(n, "the unfolded linear-indexed sort grammar covers n <= 3")
    prods = [
        indexed_production("S", ("1", _ref("S"), "1")),
        indexed_production("S", (SEPARATOR, _ref("T"))),
        indexed_production("T", (), consumed_flag=BOTTOM),
    ]
    if n >= 2:
        prods += [indexed_production("S", ("2", _ref("S", "2"))), indexed_production("T", (_ref("T"), "2"), consumed_flag="2")]
    if n >= 3:
        prods += [indexed_production("S", ("3", _ref("S", "3"))), indexed_production("T", ("3", _ref("T")), consumed_flag="3")]
    g = make_indexed_grammar(prods, "S", flags=set(sort_letters(n)[1:]) | {BOTTOM})
    return ig_validate_partitioned(g, (), ("S",), ("T",))


def sort_lig_two_tape(n: int = 4) -> IndexedGrammar:
    """S → (1,1)S | (2,ε)S+2 | (3,ε)S+3 | (4,ε)S(ε,4) | T ; T[2] → (ε,2)T ; T[3] → T(ε,3) ; T[$] → ε"""
    if n > 4:
        raise ShapeViolation(n, "the two-tape linear-indexed sort grammar covers n <= 4")
    prods = [
        indexed_production("S", (P("1", "1"), _ref("S"))),
        indexed_production("S", (_ref("T"),)),
        indexed_production("T", (), consumed_flag=BOTTOM),
    ]
    if n >= 2:
        prods += [
            indexed_production("S", (P("2", ""), _ref("S", "2"))),
            indexed_production("T", (P("", "2"), _ref("T")), consumed_flag="2"),
        ]
    if n >= 3:
        prods += [
            indexed_production("S", (P("3", ""), _ref("S", "3"))),
            indexed_production("T", (_ref("T"), P("", "3")), consumed_flag="3"),
        ]
    if n >= 4:
        prods.append(indexed_production("S", (P("4", ""), _ref("S"), P("", "4"))))
    flags = {f for f in ("2", "3") if f in sort_letters(n)} | {BOTTOM}
    return make_indexed_grammar(prods, "S", flags=flags)


def sort_indexed_unfolded(n: int = 4) -> PartitionedIndexedGrammar:
    """S → S+x | T # Tₙ … T₁ ; T[x] → xT ; T_x[x] → xT_x ; T_x[y] → T_x ; T[$], T_x[$] → ε.

    La pila de S guarda w invertida; T la escribe y cada T_x extrae las x.
    """
    xs = sort_letters(n)
    collectors = [f"T_{x}" for x in xs]
    prods = [indexed_production("S", (_ref("S", x),)) for x in xs]
    prods.append(IndexedProduction(
        "S", (_ref("T"), SEPARATOR) + tuple(_ref(c) for c in reversed(collectors)), None, None,
    ))
    prods += [indexed_production("T", (x, _ref("T")), consumed_flag=x) for x in xs]
    prods.append(indexed_production("T", (), consumed_flag=BOTTOM))
    for x, c in zip(xs, collectors):
        for y in xs:
            rhs = (x, _ref(c)) if y == x else (_ref(c),)
            prods.append(indexed_production(c, rhs, consumed_flag=y))
        prods.append(indexed_production(c, (), consumed_flag=BOTTOM))
    g = make_indexed_grammar(prods, "S", flags=set(xs) | {BOTTOM})
    return ig_validate_partitioned(g, ("T",), ("S",), collectors)


def equality_nfa(alphabet: Sequence[str] = ("a", "b")) -> Nfa:
    return make_nfa([("q", P(x, x), "q") for x in alphabet], {"q"}, {"q"})


def equality_grammar(alphabet: Sequence[str] = ("a", "b")) -> ContextFreeGrammar:
    words = validate_left_regular(_cfg([("S", (x, "S")) for x in alphabet] + [("S", ())]))
    return diagonal_grammar(words)


def same_len_same_a_oca() -> CounterAutomaton:
    """El contador lleva |u|_a − |v|_a sobre letras sincronizadas"""
    trans = [
        ("q", P("a", "a"), 0, "q"),
        ("q", P("b", "b"), 0, "q"),
        ("q", P("a", "b"), 1, "q"),
        ("q", P("b", "a"), -1, "q"),
    ]
    return make_counter_automaton(trans, {"q"}, {"q"}, CounterMode.BLIND)


def pow2_system() -> ET0LSystem:
    """S → SS (tabla d) o S → x (tabla t): x^(2ⁿ)"""
    tables = (make_table("d", {"S": [("S", "S")]}), make_table("t", {"S": [("x",)]}))
    return ET0LSystem(frozenset({"S"}), frozenset({"x"}), ("S",), tables)


def pow2_diagonal() -> EDT0LWitness:
    return edt0l_validate(diagonal_grammar(pow2_system()))


def abc_lig(letters: Sequence[str] = ("a", "b", "c")) -> IndexedGrammar:
    """S → aS+f c | T ; T[f] → bT ; T[$] → ε"""
    a, b, c = letters
    prods = [
        indexed_production("S", (a, _ref("S", "f"), c)),
        indexed_production("S", (_ref("T"),)),
        indexed_production("T", (b, _ref("T")), consumed_flag="f"),
        indexed_production("T", (), consumed_flag=BOTTOM),
    ]
    return make_indexed_grammar(prods, "S", flags={"f", BOTTOM})


def abc_unfolded() -> IndexedGrammar:
    g = abc_lig()
    top = indexed_production("Z", (_ref("S"), SEPARATOR))
    return make_indexed_grammar(g.productions + (top,), "Z", flags=g.flags)


def lin_triple_lig() -> IndexedGrammar:
    """Gramática de {a₁ⁿa₂ⁿa₃ⁿ} con aᵢ ↦ (aᵢ,bᵢ)"""
    g = abc_lig(("a1", "a2", "a3"))
    return substitute_terminals(g, {f"a{i}": P(f"a{i}", f"b{i}") for i in (1, 2, 3)})


def swap_ab_grammar() -> ContextFreeGrammar:
    return _cfg([("K", (P("a", "b"), P("b", "a")))], start="K")


def swap_blocks_grammar() -> ContextFreeGrammar:
    return _cfg([("S", (P("a", "b"), "S", P("b", "a"))), ("S", ())])


def swap_blocks_oca() -> CounterAutomaton:
    trans = [
        ("s0", P("a", "b"), 1, "s0"),
        ("s0", P("b", "a"), -1, "s1"),
        ("s1", P("b", "a"), -1, "s1"),
    ]
    return make_counter_automaton(trans, {"s0"}, {"s0", "s1"}, CounterMode.TESTED)


# ================================
# AUTÓMATAS DE PROBLEMAS DE LA PALABRA
# ================================

def fg1_oca() -> CounterAutomaton:
    """Cuatro estados (fase, signo); el contador guarda el valor absoluto"""
    flip = {"+": "-", "-": "+"}
    trans: List[Tuple] = []
    for sign, up, down in (("+", "x", "X"), ("-", "X", "x")):
        u, v = f"u{sign}", f"v{sign}"
        trans += [
            (u, up, 1, u),
            (u, down, -1, u),
            (u, down, Guard.ZERO, 1, f"u{flip[sign]}"),
            (u, SEPARATOR, 0, v),
            (v, down, 1, v),
            (v, up, -1, v),
            (v, up, Guard.ZERO, 1, f"v{flip[sign]}"),
        ]
    return make_counter_automaton(trans, {"u+"}, {"v+", "v-"}, CounterMode.TESTED)


def fg1_blind_oca() -> CounterAutomaton:
    trans = [
        ("u", "x", 1, "u"), ("u", "X", -1, "u"), ("u", SEPARATOR, 0, "v"),
        ("v", "x", -1, "v"), ("v", "X", 1, "v"),
    ]
    return make_counter_automaton(trans, {"u"}, {"v"}, CounterMode.BLIND)


def fg2_pda() -> PushdownAutomaton:
    """Reduce u y luego v⁻¹ sobre la misma pila; acepta por pila vacía"""
    inv = FREE_GROUP_INVERSES
    letters = ("x", "X", "y", "Y")
    stack = ("Z",) + letters
    trans: List[Tuple] = []
    for a in letters:
        for top in stack:
            trans.append(("p", a, top, () if top == inv[a] else (a, top), "p"))
            trans.append(("q", a, top, () if top == a else (inv[a], top), "q"))
    trans += [("p", SEPARATOR, top, (top,), "q") for top in stack]
    trans.append(("q", None, "Z", (), "q"))
    return make_pda(trans, "p", acceptance=PdaAcceptance.EMPTY_STACK, bottom="Z")


def m1_oca() -> CounterAutomaton:
    """q₀ copia; p₁/p₂ reconocen ℓaⁿbⁿr contra ℓbⁿaⁿr y q₁/q₂ el caso simétrico"""
    left, right = _markers()
    trans: List[Tuple] = [("q0", P(y, y), 0, "q0") for y in ("a", "b", left, right)]
    for first, second, big, small in (("p1", "p2", "a", "b"), ("q1", "q2", "b", "a")):
        trans += [
            ("q0", P(left, left), 0, first),
            (first, P(big, small), 1, first),
            (first, P(small, big), -1, second),
            (second, P(small, big), -1, second),
            (second, P(right, right), Guard.ZERO, 0, "q0"),
        ]
    return make_counter_automaton(trans, {"q0"}, {"q0"}, CounterMode.TESTED)


# ================================
# ORÁCULOS
# ================================

def _rho_h(u: Word, v: Word) -> bool:
    """xⁿ ↦ x^(nⁿ), con 0⁰ = 1; se decide sin construir la imagen"""
    if any(s != "x" for s in u + v):
        return False
    n = len(u)
    return len(v) == n ** n


def _pow2(u: Word) -> Optional[Word]:
    n = len(u)
    return u if n and n & (n - 1) == 0 else None


def _min_rotation(w: Word) -> Word:
    return min((w[i:] + w[:i] for i in range(len(w))), default=())


def _abc_split(u: Word, letters: Sequence[str]) -> Optional[int]:
    n, rest = divmod(len(u), 3)
    if rest:
        return None
    a, b, c = letters
    return n if u == (a,) * n + (b,) * n + (c,) * n else None


def _lin_triple(u: Word) -> Optional[Word]:
    n = _abc_split(u, ("a1", "a2", "a3"))
    return None if n is None else ("b1",) * n + ("b2",) * n + ("b3",) * n


def _swap_blocks(u: Word) -> Optional[Word]:
    n, rest = divmod(len(u), 2)
    if rest or u != ("a",) * n + ("b",) * n:
        return None
    return ("b",) * n + ("a",) * n


def _abc_words(bound: int) -> List[Word]:
    return [("a",) * n + ("b",) * n + ("c",) * n for n in range(bound // 3 + 1)]


# ================================
# ENTRADAS
# ================================

@dataclass(frozen=True)
class Representation:
    label: str
    viewpoint: Viewpoint
    build: Callable[[], Any]


@dataclass(frozen=True)
class ZooEntry:
    """Relación con su oráculo.

    El oráculo es una función parcial (`function`, sobre palabras de `domain`),
    un invariante de clase que depende de la cota (`classifier`) o un
    predicado sobre pares (`decider`).
    """
    name: str
    alphabet: Tuple[str, ...]
    locus: str
    check_bound: int
    representations: Tuple[Representation, ...] = ()
    function: Optional[Callable[[Word], Optional[Word]]] = None
    domain: Optional[Tuple[str, ...]] = None
    classifier: Optional[Callable[[int], Callable[[Word], Hashable]]] = None
    decider: Optional[Callable[[Word, Word], bool]] = None

    def decide(self, u: Sequence[str], v: Sequence[str]) -> bool:
        u, v = tuple(u), tuple(v)
        if self.function is not None:
            return self.function(u) == v
        if self.classifier is not None:
            key = self.classifier(max(len(u), len(v)))
            return key(u) == key(v)
        return self.decider(u, v)

    def sample(
        self, bound: int, first: Optional[Iterable[Word]] = None, second: Optional[Iterable[Word]] = None
    ) -> RelationSample:
        """Muestra del oráculo; `first` y `second` restringen los candidatos de cada componente"""
        if self.function is not None:
            domain = first if first is not None else all_words(self.domain or self.alphabet, bound)
            s = sample_from_function(domain, self.function, bound)
            if second is None:
                return s
            keep = {tuple(w) for w in second}
            return RelationSample(bound=bound, pairs=frozenset(p for p in s.pairs if p[1] in keep))
        words = list(all_words(self.alphabet, bound)) if first is None or second is None else []
        lefts = [tuple(w) for w in first] if first is not None else words
        rights = [tuple(w) for w in second] if second is not None else words
        if self.classifier is not None:
            key = self.classifier(bound)
            if first is None and second is None:
                return sample_from_classifier(words, key, bound)
            by_key: Dict[Hashable, List[Word]] = defaultdict(list)
            for v in rights:
                by_key[key(v)].append(v)
            pairs = [(u, v) for u in lefts for v in by_key.get(key(u), ())]
            return RelationSample.truncated(bound, pairs)
        return sample_from_decider(lefts, rights, self.decider, bound)

    def representation(self, label: str) -> Any:
        for rep in self.representations:
            if rep.label == label:
                return rep.build()
        raise UnknownZooEntry(f"{self.name}/{label}")

    def summary(self) -> ZooEntrySummary:
        return ZooEntrySummary(
            name=self.name,
            alphabet=list(self.alphabet),
            locus=self.locus,
            check_bound=self.check_bound,
            representations=[r.label for r in self.representations],
        )


def _identity_key(bound: int) -> Callable[[Word], Hashable]:
    return lambda w: w


def _rev_entry(letters: str = "ab") -> ZooEntry:
    xs = tuple(letters)
    return ZooEntry(
        "rev", xs, "reversal; two-tape context-free", 6,
        (Representation("two-tape-cfg", Viewpoint.TWO_TAPE, lambda: rev_grammar(xs)),),
        function=lambda u: tuple(reversed(u)),
    )


def _rho_e_entry() -> ZooEntry:
    return ZooEntry(
        "rho_e", ("x",), "identity on x*; two-tape regular", 8,
        (Representation("two-tape-rg", Viewpoint.TWO_TAPE, rho_e_grammar),),
        function=lambda u: u,
    )


def _rho_f_entry(p: str = "2") -> ZooEntry:
    k = int(p)
    if k < 1:
        raise UnknownZooEntry(f"rho_f({p})")
    return ZooEntry(
        f"rho_f({k})", ("x",), "n -> n mod p; unfolded regular", 8,
        (
            Representation("unfolded-nfa", Viewpoint.UNFOLDED, lambda: rho_f_nfa(k)),
            Representation("two-tape-fst", Viewpoint.TWO_TAPE, lambda: rho_f_transducer(k)),
            Representation(
                "unfolded-oca", Viewpoint.UNFOLDED, lambda: unary_transducer_to_unfolded_oca(rho_f_transducer(k)),
            ),
        ),
        function=lambda u: ("x",) * (len(u) % k),
    )


def _rho_g_entry() -> ZooEntry:
    return ZooEntry(
        "rho_g", ("x",), "n -> n^2; unfolded ET0L", 5,
        (Representation("unfolded-etol", Viewpoint.UNFOLDED, rho_g_system),),
        function=lambda u: ("x",) * (len(u) ** 2),
    )


def _rho_h_entry() -> ZooEntry:
    return ZooEntry("rho_h", ("x",), "n -> n^n; decider only", 6, (), decider=_rho_h)


def _sort_entry(n: str = "3") -> ZooEntry:
    k = int(n)
    if k < 1:
        raise UnknownZooEntry(f"sort_o({n})")
    reps = []
    if k <= 2:
        reps.append(Representation("two-tape-cfg", Viewpoint.TWO_TAPE, lambda: sort_cfg(k)))
    if k <= 3:
        reps.append(Representation("unfolded-lig", Viewpoint.UNFOLDED, lambda: sort_lig_unfolded(k)))
    if k <= 4:
        reps.append(Representation("two-tape-lig", Viewpoint.TWO_TAPE, lambda: sort_lig_two_tape(k)))
    reps.append(Representation("unfolded-ig", Viewpoint.UNFOLDED, lambda: sort_indexed_unfolded(k)))
    return ZooEntry(f"sort_o({k})", sort_letters(k), "sorting by content", 4, tuple(reps), function=sort_key)


def _kappa_entry(letters: str = "ab") -> ZooEntry:
    xs = tuple(letters)
    return ZooEntry(
        "kappa", xs, "rotation (uv, vu); unfolded ET0L and linear-indexed", 5,
        (
            Representation("unfolded-etol", Viewpoint.UNFOLDED, lambda: kappa_system(xs)),
            Representation("unfolded-lig", Viewpoint.UNFOLDED, lambda: kappa_lig(xs)),
        ),
        classifier=lambda bound: _min_rotation,
    )


def _equality_entry(letters: str = "ab") -> ZooEntry:
    xs = tuple(letters)
    return ZooEntry(
        "equality", xs, "equality relation; two-tape regular", 6,
        (
            Representation("two-tape-nfa", Viewpoint.TWO_TAPE, lambda: equality_nfa(xs)),
            Representation("two-tape-rg", Viewpoint.TWO_TAPE, lambda: equality_grammar(xs)),
        ),
        function=lambda u: u,
    )


def _same_len_same_a_entry() -> ZooEntry:
    return ZooEntry(
        "same_len_same_a", ("a", "b"), "|u| = |v| and |u|_a = |v|_a; two-tape counter", 6,
        (Representation("two-tape-oca", Viewpoint.TWO_TAPE, same_len_same_a_oca),),
        classifier=lambda bound: lambda w: (len(w), w.count("a")),
    )


def _pow2_entry() -> ZooEntry:
    return ZooEntry(
        "pow2_diag", ("x",), "diagonal of x^(2^n); EDT0L", 8,
        (
            Representation("two-tape-edt0l", Viewpoint.TWO_TAPE, pow2_diagonal),
            Representation("unfolded-edt0l", Viewpoint.UNFOLDED, lambda: two_tape_edt0l_to_unfolded(pow2_diagonal())),
        ),
        function=_pow2,
    )


def _lin_triple_entry() -> ZooEntry:
    return ZooEntry(
        "lin_triple", ("a1", "a2", "a3", "b1", "b2", "b3"), "(a1^n a2^n a3^n, b1^n b2^n b3^n); two-tape linear-indexed", 6,
        (Representation("two-tape-lig", Viewpoint.TWO_TAPE, lin_triple_lig),),
        function=_lin_triple,
        domain=("a1", "a2", "a3"),
    )


def _swap_ab_entry() -> ZooEntry:
    return ZooEntry(
        "swap_ab", ("a", "b"), "single pair (ab, ba)", 6,
        (Representation("two-tape-cfg", Viewpoint.TWO_TAPE, swap_ab_grammar),),
        function=lambda u: ("b", "a") if u == ("a", "b") else None,
    )


def _swap_blocks_entry() -> ZooEntry:
    return ZooEntry(
        "swap_blocks", ("a", "b"), "(a^n b^n, b^n a^n); two-tape counter", 8,
        (
            Representation("two-tape-oca", Viewpoint.TWO_TAPE, swap_blocks_oca),
            Representation("two-tape-cfg", Viewpoint.TWO_TAPE, swap_blocks_grammar),
        ),
        function=_swap_blocks,
    )


def _abc_entry() -> ZooEntry:
    return ZooEntry(
        "abc", ("a", "b", "c"), "(a^n b^n c^n, empty); unfolded linear-indexed", 6,
        (Representation("unfolded-lig", Viewpoint.UNFOLDED, abc_unfolded),),
        function=lambda u: () if _abc_split(u, ("a", "b", "c")) is not None else None,
    )


def _wp_f1_entry() -> ZooEntry:
    return ZooEntry(
        "wp_F1", ("x",), "word problem of the free monoid of rank 1", 8,
        (Representation("two-tape-rg", Viewpoint.TWO_TAPE, rho_e_grammar),),
        classifier=_identity_key,
    )


def _wp_fg1_entry() -> ZooEntry:
    return ZooEntry(
        "wp_FG1", ("x", "X"), "word problem of the free group of rank 1", 5,
        (
            Representation("unfolded-oca", Viewpoint.UNFOLDED, fg1_oca),
            Representation("unfolded-blind-oca", Viewpoint.UNFOLDED, fg1_blind_oca),
        ),
        classifier=lambda bound: signed_count,
    )


def _wp_fg2_entry() -> ZooEntry:
    return ZooEntry(
        "wp_FG2", ("x", "X", "y", "Y"), "word problem of the free group of rank 2", 4,
        (Representation("unfolded-pda", Viewpoint.UNFOLDED, fg2_pda),),
        classifier=lambda bound: free_reduce,
    )


def _block_key(pairs_for: Callable[[int], Iterable], left: str, right: str) -> Callable[[int], Callable[[Word], Hashable]]:
    return lambda bound: BlockCongruence(pairs_for(bound), left, right).key


def _wp_m1_entry() -> ZooEntry:
    left, right = _markers()
    swap = _swap_blocks_entry()
    return ZooEntry(
        "wp_M1", ("a", "b", left, right), "word problem of M[(a^n b^n, b^n a^n)]", 8,
        (Representation("two-tape-oca", Viewpoint.TWO_TAPE, m1_oca),),
        classifier=_block_key(lambda bound: swap.sample(bound).pairs, left, right),
    )


def _relation_grammar(entry: ZooEntry) -> Any:
    for rep in entry.representations:
        if rep.viewpoint != Viewpoint.TWO_TAPE:
            continue
        obj = rep.build()
        if isinstance(obj, (ContextFreeGrammar, IndexedGrammar)):
            return obj
    return None


def _wp_m_rho_entry(rho: str = "swap_ab", name: Optional[str] = None) -> ZooEntry:
    left, right = _markers()
    inner = zoo_service.entry(rho)
    if _relation_grammar(inner) is None:
        raise UnknownZooEntry(f"wp_M_rho({rho})")
    letters = tuple(sorted(set(inner.alphabet)))
    return ZooEntry(
        name or f"wp_M_rho({rho})", letters + (left, right), f"word problem of M[{inner.name}]",
        5 if len(letters) > 3 else 6,
        (
            Representation(
                "two-tape-wp", Viewpoint.TWO_TAPE,
                lambda: monoid_two_tape_wp(_relation_grammar(inner), alphabet=letters),
            ),
        ),
        classifier=_block_key(lambda bound: inner.sample(bound).pairs, left, right),
    )


LANGUAGES: Dict[str, Tuple[Callable[[], Any], Tuple[str, ...], Callable[[int], List[Word]]]] = {
    "ab": (lambda: _cfg([("S", ("a", "b"))]), ("a", "b"), lambda bound: [("a", "b")] if bound >= 2 else []),
    "abc": (abc_lig, ("a", "b", "c"), _abc_words),
}


def _wp_m_l_entry(language: str = "ab") -> ZooEntry:
    if language not in LANGUAGES:
        raise UnknownZooEntry(f"wp_M_L({language})")
    left, right = _markers()
    grammar, letters, words = LANGUAGES[language]
    return ZooEntry(
        f"wp_M_L({language})", letters + (left, right), f"word problem of M(L) for L = {language}", 6,
        (
            Representation(
                "unfolded-wp", Viewpoint.UNFOLDED,
                lambda: monoid_unfolded_wp_indexed(grammar(), alphabet=letters),
            ),
        ),
        classifier=lambda bound: BlockCongruence.for_language(words(bound), left, right).key,
    )


def _wp_m5_entry() -> ZooEntry:
    return _wp_m_rho_entry("lin_triple", name="wp_M5")


# ================================
# SERVICIO
# ================================

_NAME_RE = re.compile(r"^(?P<base>[A-Za-z0-9_]+)(?:\((?P<arg>[^()]*)\))?$")


class ZooService:
    """Registro de entradas del zoo; se construyen bajo demanda y se cachean"""

    def __init__(self):
        self._builders: Dict[str, Callable[..., ZooEntry]] = {
            "rev": _rev_entry,
            "rho_e": _rho_e_entry,
            "rho_f": _rho_f_entry,
            "rho_g": _rho_g_entry,
            "rho_h": _rho_h_entry,
            "sort_o": _sort_entry,
            "kappa": _kappa_entry,
            "equality": _equality_entry,
            "same_len_same_a": _same_len_same_a_entry,
            "pow2_diag": _pow2_entry,
            "lin_triple": _lin_triple_entry,
            "swap_ab": _swap_ab_entry,
            "swap_blocks": _swap_blocks_entry,
            "abc": _abc_entry,
            "wp_F1": _wp_f1_entry,
            "wp_FG1": _wp_fg1_entry,
            "wp_FG2": _wp_fg2_entry,
            "wp_M1": _wp_m1_entry,
            "wp_M_rho": _wp_m_rho_entry,
            "wp_M_L": _wp_m_l_entry,
            "wp_M5": _wp_m5_entry,
        }
        self._cache: Dict[str, ZooEntry] = {}

    @property
    def names(self) -> List[str]:
        return list(self._builders)

    def entry(self, name: str) -> ZooEntry:
        if name in self._cache:
            return self._cache[name]
        match = _NAME_RE.match(name.strip())
        if not match or match.group("base") not in self._builders:
            raise UnknownZooEntry(name)
        builder = self._builders[match.group("base")]
        arg = match.group("arg")
        try:
            entry = builder(arg) if arg else builder()
        except (TypeError, ValueError):
            raise UnknownZooEntry(name)
        self._cache[name] = entry
        return entry

    def list_entries(self) -> List[ZooEntrySummary]:
        return [self.entry(n).summary() for n in self._builders]

    def sample(
        self, name: str, bound: int, first: Optional[Nfa] = None, second: Optional[Nfa] = None
    ) -> RelationSample:
        """Muestra del oráculo, opcionalmente restringida a los lenguajes de dos NFA"""
        entry = self.entry(name)
        lefts = nfa_enumerate(first, bound) if first is not None else None
        rights = nfa_enumerate(second, bound) if second is not None else None
        s = entry.sample(bound, lefts, rights)
        logger.debug("zoo sample %s cota=%d -> %d pares", name, bound, s.size)
        return s

    def check(self, name: str, bound: Optional[int] = None, steps: Optional[int] = None) -> ZooCheckReport:
        """Compara cada representación con el oráculo en la cota dada"""
        entry = self.entry(name)
        bound = entry.check_bound if bound is None else bound
        expected = entry.sample(bound)
        checks: List[RepresentationCheck] = []
        for rep in entry.representations:
            obj = rep.build()
            actual, complete = relation_sample(obj, rep.viewpoint, bound, steps)
            comparison = sample_equal(expected, actual)
            if not comparison.equal:
                logger.warning("zoo %s/%s difiere del oráculo en cota %d", entry.name, rep.label, bound)
            checks.append(RepresentationCheck(
                label=rep.label,
                formalism=formalism_of(obj),
                viewpoint=rep.viewpoint,
                complete=complete,
                comparison=comparison,
            ))
        notes = [] if checks else ["decider only; no representation is registered"]
        verified = all(c.comparison.equal and c.complete for c in checks)
        logger.info("zoo check %s cota=%d: %s", entry.name, bound, "ok" if verified else "falla")
        return ZooCheckReport(
            name=entry.name,
            bound=bound,
            sample_size=expected.size,
            verified=verified,
            representations=checks,
            notes=notes,
        )

    def representation(self, name: str, label: str) -> Any:
        return self.entry(name).representation(label)

    def decide(self, name: str, u: Sequence[str], v: Sequence[str]) -> bool:
        return self.entry(name).decide(u, v)


zoo_service = ZooService()


def zoo_list() -> List[ZooEntrySummary]:
    return zoo_service.list_entries()


def zoo_sample(name: str, bound: int, first: Optional[Nfa] = None, second: Optional[Nfa] = None) -> RelationSample:
    return zoo_service.sample(name, bound, first, second)


def zoo_check(name: str, bound: Optional[int] = None, steps: Optional[int] = None) -> ZooCheckReport:
    return zoo_service.check(name, bound, steps)
