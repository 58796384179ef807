"""
Construcciones entre codificaciones de relaciones, cada una con su
verificación acotada contra la relación de entrada.

Las funciones de construcción son puras y devuelven el objeto construido;
`run_construction` las ejecuta por nombre y arma el ConstructionReport.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from core.config import settings
from core.errors import (
    AlphabetClash, GuardedInput, NonUnaryLabel, ShapeViolation, UnknownFormalism,
)
from core.logger import get_logger
from core.words import (
    SEPARATOR, LengthBudget, PairLetter, RelationSample, Symbol,
    all_words, compare_word_sets, image_word, pair_letter, sample_equal,
    sample_from_classifier, symbol_key,
)
from models.RelkitModels import (
    ConstructionReport, CounterMode, Guard, Verdict, Viewpoint,
)
from services.automata_service import (
    CounterAutomaton, CounterTransition, Nfa, NfaTransition, Transducer, make_counter_automaton,
)
from services.grammar_service import (
    ContextFreeGrammar, PartitionedRegularGrammar, Production,
    cfg_substitute, fresh_name, make_grammar, partition_for_hash, to_cnf,
    validate_left_regular, validate_mirrored_regular,
)
from services.indexed_service import (
    IndexedGrammar, IndexedProduction, NonterminalRef, PartitionedIndexedGrammar,
    BOTTOM, indexed_production, ig_from_cfg, ig_rename, ig_reverse, ig_substitute,
    ig_to_cfg, make_indexed_grammar,
)
from services.lsystem_service import EDT0LWitness, ET0LSystem, Table, edt0l_validate, etol_substitute
from services.monoid_service import BlockCongruence
from services.relation_service import enumerate_words, relation_sample, summarize

logger = get_logger(__name__)


def _is_split(s: Symbol) -> bool:
    return not isinstance(s, PairLetter) or not (s.left and s.right)


def _letters_of(terminals: Iterable[Symbol]) -> Set[str]:
    """Letras de las componentes de un alfabeto de pares"""
    out: Set[str] = set()
    for t in terminals:
        if isinstance(t, PairLetter):
            out.update(x for x in (t.left, t.right) if x)
        else:
            out.add(t)
    return out


# ================================
# UNFOLDED → TWO-TAPE
# ================================

def unfolded_regular_to_two_tape(g: ContextFreeGrammar) -> ContextFreeGrammar:
    """Reemplazos por parte: N₁ lee (a,ε), N₂ borra #, N₃ escribe (ε,a) a la derecha"""
    if not isinstance(g, PartitionedRegularGrammar):
        g = partition_for_hash(validate_left_regular(g))
    prods: List[Production] = []
    for p in g.productions:
        nts = tuple(s for s in p.rhs if g.is_nonterminal(s))
        terms = [s for s in p.rhs if not g.is_nonterminal(s)]
        if any(isinstance(t, PairLetter) for t in terms):
            raise ShapeViolation(p, "unfolded grammars have single-tape terminals")
        part = g.part_of(p.lhs)
        if part == 1:
            rhs = tuple(pair_letter(t, "") for t in terms) + nts
        elif part == 2:
            rhs = nts
        else:
            rhs = nts + tuple(pair_letter("", t) for t in terms)
        prods.append(Production(p.lhs, rhs))
    out = make_grammar(prods, g.start, nonterminals=g.nonterminals)
    return validate_mirrored_regular(out)


def unfolded_oca_to_two_tape(a: CounterAutomaton) -> CounterAutomaton:
    """Fase 1 simula a sobre (u,ε); fase 2 recorre a hacia atrás sobre (ε,v).

    Los estados de la fase 2 son (destino de #, estado actual); los
    incrementos no se niegan porque un solo contador suma ambas mitades.
    """
    if a.mode != CounterMode.BLIND or a.uses_guards:
        raise GuardedInput()
    taken = set(a.states)
    names: Dict[Tuple[str, str], str] = {}

    def phase2(target: str, current: str) -> str:
        if (target, current) not in names:
            names[(target, current)] = fresh_name(f"{target}/{current}", taken)
        return names[(target, current)]

    trans: List[Tuple] = []
    hash_targets = sorted({t.target for t in a.transitions if t.symbol == SEPARATOR})
    for t in a.transitions:
        if t.symbol == SEPARATOR:
            for f in sorted(a.finals):
                trans.append((t.source, None, t.delta, phase2(t.target, f)))
        elif t.symbol is None:
            trans.append((t.source, None, t.delta, t.target))
        else:
            trans.append((t.source, pair_letter(t.symbol, ""), t.delta, t.target))
    for target in hash_targets:
        for t in a.transitions:
            if t.symbol == SEPARATOR:
                continue
            label = None if t.symbol is None else pair_letter("", t.symbol)
            trans.append((phase2(target, t.target), label, t.delta, phase2(target, t.source)))
    finals = {phase2(g, g) for g in hash_targets}
    return make_counter_automaton(trans, a.initial, finals, CounterMode.BLIND, states=a.states)


def _retag(tagged: Sequence[Tuple[Any, Optional[int]]], side: str) -> List[Tuple[Any, Optional[int]]]:
    """Terminales del lado L pasan a (a,ε) y los del lado R a (ε,a)"""
    out = []
    for item, ordinal in tagged:
        if not isinstance(item, NonterminalRef):
            item = pair_letter(item, "") if side == "L" else pair_letter("", item)
        out.append((item, ordinal))
    return out


def unfolded_indexed_to_two_tape(pg: PartitionedIndexedGrammar) -> IndexedGrammar:
    """Aplica las cinco filas de la tabla de particiones; conserva la clase de la gramática"""
    g = pg.grammar
    prods: List[IndexedProduction] = []
    for p, row in zip(g.productions, pg.rows):
        # cada hijo lleva su ordinal original para reubicar el hijo lineal
        tagged = []
        ordinal = 0
        for item in p.rhs:
            if isinstance(item, NonterminalRef):
                tagged.append((item, ordinal))
                ordinal += 1
            else:
                tagged.append((item, None))
        if row == 5:
            new = tagged
        elif row == 3:
            new = _retag(tagged, "L")
        elif row == 4:
            new = list(reversed(_retag(tagged, "R")))
        else:
            k = next(
                i for i, (item, _) in enumerate(tagged)
                if item == SEPARATOR or (isinstance(item, NonterminalRef) and pg.part_of(item.name) == "#")
            )
            new = _retag(tagged[:k], "L") + list(reversed(_retag(tagged[k + 1:], "R")))
            if row == 2:
                new.append(tagged[k])
        rhs = tuple(item for item, _ in new)
        linear = None
        if p.linear_child is not None:
            order = [o for _, o in new if o is not None]
            linear = order.index(p.linear_child)
        prods.append(IndexedProduction(p.lhs, rhs, p.consumed_flag, linear))
    return make_indexed_grammar(prods, g.start, flags=g.flags, nonterminals=g.nonterminals, kind=g.kind)


# ================================
# TWO-TAPE → UNFOLDED
# ================================

def two_tape_edt0l_to_unfolded(h: Union[EDT0LWitness, ET0LSystem]) -> EDT0LWitness:
    """Cada A → α se desdobla en A₁ → α₁ y A₂ → α₂^rev; axioma I₁#I₂^rev"""
    sys = h.system if isinstance(h, EDT0LWitness) else h
    edt0l_validate(sys)
    for t in sys.terminals:
        if not isinstance(t, PairLetter):
            raise ShapeViolation(t, "two-tape systems have pair-letter terminals")
    letters = _letters_of(sys.terminals)
    taken = set(letters) | {SEPARATOR}
    first = {a: fresh_name(f"{a}_1", taken) for a in sorted(sys.nonterminals)}
    second = {a: fresh_name(f"{a}_2", taken) for a in sorted(sys.nonterminals)}

    def component(form: Sequence[Symbol], i: int) -> Tuple[str, ...]:
        out: List[str] = []
        for s in form:
            if s in sys.nonterminals:
                out.append(first[s] if i == 1 else second[s])
            else:
                c = s.left if i == 1 else s.right
                if c:
                    out.append(c)
        return tuple(out)

    axiom = component(sys.axiom, 1) + (SEPARATOR,) + tuple(reversed(component(sys.axiom, 2)))
    tables = []
    for t in sys.tables:
        rules = []
        implicit = set()
        for symbol, options in t.rules:
            if symbol not in sys.nonterminals:
                continue
            (alpha,) = options
            rules.append((first[symbol], (component(alpha, 1),)))
            rules.append((second[symbol], (tuple(reversed(component(alpha, 2))),)))
            if symbol in t.implicit:
                implicit.update((first[symbol], second[symbol]))
        rules.sort(key=lambda kv: symbol_key(kv[0]))
        tables.append(Table(t.name, tuple(rules), frozenset(implicit)))
    out = ET0LSystem(
        nonterminals=frozenset(first.values()) | frozenset(second.values()),
        terminals=frozenset(letters | {SEPARATOR}),
        axiom=axiom,
        tables=tuple(tables),
    )
    return edt0l_validate(out)


def _split_letter(s: Symbol) -> Tuple[Symbol, ...]:
    if isinstance(s, PairLetter) and s.left and s.right:
        return (PairLetter(s.left, ""), PairLetter("", s.right))
    return (s,)


def split_pair_letters(obj: Any) -> Any:
    """Reescribe (a,b) como (a,ε)(ε,b); la imagen por π no cambia"""
    if isinstance(obj, ContextFreeGrammar):
        if all(_is_split(t) for t in obj.terminals):
            return obj
        return cfg_substitute(obj, _split_letter)
    if isinstance(obj, IndexedGrammar):
        if all(_is_split(t) for t in obj.terminals):
            return obj
        return ig_substitute(obj, _split_letter)
    if isinstance(obj, EDT0LWitness):
        return edt0l_validate(split_pair_letters(obj.system))
    if isinstance(obj, ET0LSystem):
        if all(_is_split(t) for t in obj.terminals):
            return obj
        return etol_substitute(obj, _split_letter)
    if isinstance(obj, Nfa):
        if all(_is_split(t) for t in obj.alphabet):
            return obj
        taken = set(obj.states)
        trans: List[NfaTransition] = []
        for i, t in enumerate(obj.transitions):
            if t.symbol is None or _is_split(t.symbol):
                trans.append(t)
                continue
            left, right = _split_letter(t.symbol)
            mid = fresh_name(f"{t.source}_{i}", taken)
            trans += [NfaTransition(t.source, left, mid), NfaTransition(mid, right, t.target)]
        alphabet = frozenset(s for t in obj.alphabet for s in _split_letter(t))
        return Nfa(frozenset(taken), alphabet, tuple(trans), obj.initial, obj.finals)
    if isinstance(obj, CounterAutomaton):
        if all(_is_split(t) for t in obj.alphabet):
            return obj
        taken = set(obj.states)
        ctrans: List[CounterTransition] = []
        for i, t in enumerate(obj.transitions):
            if t.symbol is None or _is_split(t.symbol):
                ctrans.append(t)
                continue
            left, right = _split_letter(t.symbol)
            mid = fresh_name(f"{t.source}_{i}", taken)
            ctrans += [
                CounterTransition(t.source, left, t.guard, t.delta, mid),
                CounterTransition(mid, right, Guard.NONE, 0, t.target),
            ]
        alphabet = frozenset(s for t in obj.alphabet for s in _split_letter(t))
        return CounterAutomaton(frozenset(taken), alphabet, tuple(ctrans), obj.initial, obj.finals, obj.mode)
    if isinstance(obj, PartitionedIndexedGrammar):
        return obj
    raise UnknownFormalism(f"cannot split pair letters of {type(obj).__name__}")


def two_tape_regular_to_unfolded_cfg(g: ContextFreeGrammar) -> ContextFreeGrammar:
    """A → (a,ε)B ↦ A → aB; A → (ε,a)B ↦ A → Ba; A → ε ↦ A → #"""
    g = validate_left_regular(g)
    letters = _letters_of(g.terminals)
    clash = sorted(letters & set(g.nonterminals))
    if clash:
        raise AlphabetClash(clash)
    prods: List[Production] = []
    for p in g.productions:
        if not p.rhs:
            prods.append(Production(p.lhs, (SEPARATOR,)))
            continue
        if len(p.rhs) == 1 and g.is_nonterminal(p.rhs[0]):
            prods.append(p)
            continue
        t = p.rhs[0]
        nxt = p.rhs[1] if len(p.rhs) == 2 else None
        if not isinstance(t, PairLetter) or (t.left and t.right):
            raise ShapeViolation(p, "expects single-tape pair letters; split them first")
        if t.left:
            rhs = (t.left, nxt) if nxt else (t.left, SEPARATOR)
        else:
            rhs = (nxt, t.right) if nxt else (SEPARATOR, t.right)
        prods.append(Production(p.lhs, rhs))
    return make_grammar(prods, g.start, terminals=letters | {SEPARATOR}, nonterminals=g.nonterminals)


def two_tape_cfg_to_unfolded_lig(g: ContextFreeGrammar) -> IndexedGrammar:
    """Las flags guardan los no terminales pendientes de una derivación por la izquierda"""
    cnf = to_cnf(split_pair_letters(g))
    letters = _letters_of(cnf.terminals)
    taken = set(letters) | {SEPARATOR}
    hub = fresh_name("I", taken)
    top = fresh_name("Z", taken)
    sub = {a: fresh_name(f"I_{a}", taken) for a in sorted(cnf.nonterminals)}
    # el inicial arranca una sola vez; el hub solo consume flags
    prods: List[IndexedProduction] = [indexed_production(top, (NonterminalRef(sub[cnf.start]),))]
    for p in cnf.productions:
        if not p.rhs:
            prods.append(indexed_production(sub[p.lhs], (NonterminalRef(hub),)))
        elif len(p.rhs) == 2:
            b, c = p.rhs
            prods.append(indexed_production(sub[p.lhs], (NonterminalRef(sub[b], (c,)),)))
        else:
            t = p.rhs[0]
            if not isinstance(t, PairLetter):
                raise ShapeViolation(p, "two-tape grammars have pair-letter terminals")
            if t.left:
                prods.append(indexed_production(sub[p.lhs], (t.left, NonterminalRef(hub))))
            else:
                prods.append(indexed_production(sub[p.lhs], (NonterminalRef(hub), t.right)))
    for a in sorted(cnf.nonterminals):
        prods.append(indexed_production(hub, (NonterminalRef(sub[a]),), consumed_flag=a))
    prods.append(indexed_production(hub, (SEPARATOR,), consumed_flag=BOTTOM))
    return make_indexed_grammar(
        prods, top,
        terminals=letters | {SEPARATOR},
        flags=set(cnf.nonterminals) | {BOTTOM},
        nonterminals=[top, hub, *sub.values()],
    )


def unary_transducer_to_unfolded_oca(t: Transducer, letter: Optional[str] = None) -> CounterAutomaton:
    """Por transición (aᵏ, aˡ): k lecturas y +ℓ; tras # cada a resta 1"""
    a = letter
    for tr in t.transitions:
        for s in tr.label[0] + tr.label[1]:
            if s == SEPARATOR or (a is not None and s != a):
                raise NonUnaryLabel(str(tr))
            a = s
    a = a or "a"
    taken = set(t.states)
    trans: List[Tuple] = []
    for i, tr in enumerate(t.transitions):
        k, gain = len(tr.label[0]), len(tr.label[1])
        if k == 0:
            trans.append((tr.source, None, gain, tr.target))
            continue
        prev = tr.source
        for j in range(k):
            nxt = tr.target if j == k - 1 else fresh_name(f"{tr.source}_{i}_{j + 1}", taken)
            trans.append((prev, a, gain if j == 0 else 0, nxt))
            prev = nxt
    drain = fresh_name("D", taken)
    for q in sorted(t.finals):
        trans.append((q, SEPARATOR, 0, drain))
    trans.append((drain, a, -1, drain))
    return make_counter_automaton(
        trans, t.initial, {drain}, CounterMode.BLIND, alphabet={a, SEPARATOR}, states=t.states,
    )


# ================================
# HOMOMORFISMOS Y SUSTITUCIONES
# ================================

def _as_map(h: Mapping[Symbol, Any]) -> Dict[Symbol, Tuple[Symbol, ...]]:
    out: Dict[Symbol, Tuple[Symbol, ...]] = {}
    for k, v in h.items():
        if isinstance(v, PairLetter) or isinstance(v, str):
            out[k] = (v,)
        else:
            out[k] = tuple(v)
    return out


def apply_homomorphism(obj: Any, h: Mapping[Symbol, Any]) -> Any:
    """Imagen por h de una gramática, sistema, muestra o conjunto de palabras"""
    hm = _as_map(h)

    def f(s: Symbol) -> Tuple[Symbol, ...]:
        return hm.get(s, (s,))

    if isinstance(obj, RelationSample):
        return obj.image(hm)
    if isinstance(obj, (set, frozenset, list)):
        return frozenset(image_word(w, hm) for w in obj)
    if isinstance(obj, ContextFreeGrammar):
        return cfg_substitute(obj, f)
    if isinstance(obj, PartitionedIndexedGrammar):
        return ig_substitute(obj.grammar, f)
    if isinstance(obj, IndexedGrammar):
        return ig_substitute(obj, f)
    if isinstance(obj, EDT0LWitness):
        return edt0l_validate(etol_substitute(obj.system, f))
    if isinstance(obj, ET0LSystem):
        return etol_substitute(obj, f)
    raise UnknownFormalism(f"cannot apply a homomorphism to {type(obj).__name__}")


def substitute_terminals(g: Any, mapping: Mapping[Symbol, Any]) -> Any:
    return apply_homomorphism(g, mapping)


def diagonal_grammar(g: Any) -> Any:
    """Cada terminal x pasa a ser la letra de pares (x,x)"""
    if isinstance(g, EDT0LWitness):
        terminals = g.system.terminals
    else:
        terminals = g.terminals
    mapping = {t: PairLetter(t, t) for t in terminals if not isinstance(t, PairLetter)}
    return substitute_terminals(g, mapping)


# ================================
# PROBLEMAS DE LA PALABRA
# ================================

def _markers(left: Optional[str], right: Optional[str]) -> Tuple[str, str]:
    return left or settings.LEFT_MARKER, right or settings.RIGHT_MARKER


def _fresh_suffix(names: Iterable[str], taken: Set[str]) -> str:
    suffix = "'"
    while any(n + suffix in taken for n in names):
        suffix += "'"
    return suffix


def _swap(s: Symbol) -> Tuple[Symbol, ...]:
    if isinstance(s, PairLetter):
        return (PairLetter(s.right, s.left),)
    return (s,)


def monoid_two_tape_wp(
    k: Union[ContextFreeGrammar, IndexedGrammar],
    alphabet: Iterable[str] = (),
    left: Optional[str] = None,
    right: Optional[str] = None,
) -> Union[ContextFreeGrammar, IndexedGrammar]:
    """Problema de la palabra de dos cintas de M[ρ] con ρ = π(L(k)).

    W → ε | (y,y)W | (ℓ,ℓ)K(r,r)W ;  K → S | S~ | E ;  E → ε | (x,x)E
    donde S~ genera ρ⁻¹. Los bloques se iteran.
    """
    left, right = _markers(left, right)
    lifted = isinstance(k, ContextFreeGrammar)
    ig = ig_from_cfg(k) if lifted else k
    for t in ig.terminals:
        if not isinstance(t, PairLetter):
            raise ShapeViolation(t, "a two-tape relation grammar has pair-letter terminals")
    letters = _letters_of(ig.terminals) | set(alphabet)
    clash = sorted(letters & {left, right})
    if clash:
        raise AlphabetClash(clash)
    xs = sorted(letters)
    ys = xs + [left, right]
    taken = set(ig.nonterminals) | set(ys)
    suffix = _fresh_suffix(ig.nonterminals, taken)
    swapped = ig_rename(ig_substitute(ig, _swap), suffix)
    taken |= set(swapped.nonterminals)
    w, kk, e = (fresh_name(n, taken) for n in ("W", "K", "E"))

    prods: List[IndexedProduction] = list(ig.productions) + list(swapped.productions)
    prods.append(indexed_production(w, ()))
    prods += [indexed_production(w, (PairLetter(y, y), NonterminalRef(w))) for y in ys]
    prods.append(IndexedProduction(
        w, (PairLetter(left, left), NonterminalRef(kk), PairLetter(right, right), NonterminalRef(w)), None, 1,
    ))
    prods += [
        indexed_production(kk, (NonterminalRef(ig.start),)),
        indexed_production(kk, (NonterminalRef(swapped.start),)),
        indexed_production(kk, (NonterminalRef(e),)),
        indexed_production(e, ()),
    ]
    prods += [indexed_production(e, (PairLetter(x, x), NonterminalRef(e))) for x in xs]
    out = make_indexed_grammar(
        prods, w,
        terminals={PairLetter(y, y) for y in ys},
        flags=ig.flags,
        nonterminals=set(ig.nonterminals) | set(swapped.nonterminals) | {w, kk, e},
    )
    logger.debug("monoid_two_tape_wp: %d producciones", len(out.productions))
    return ig_to_cfg(out) if lifted else out


def monoid_unfolded_wp_indexed(
    g: Union[ContextFreeGrammar, IndexedGrammar],
    alphabet: Iterable[str] = (),
    left: Optional[str] = None,
    right: Optional[str] = None,
) -> Union[ContextFreeGrammar, IndexedGrammar]:
    """Gramática de L_σ para σ el problema de la palabra de M(L), L = L(g).

    I → aI a | ℓSrIrℓ | ℓrIrS′ℓ | ℓSrIrS′ℓ | #, con S′ inicial de g invertida.
    """
    left, right = _markers(left, right)
    lifted = isinstance(g, ContextFreeGrammar)
    ig = ig_from_cfg(g) if lifted else g
    for t in ig.terminals:
        if isinstance(t, PairLetter):
            raise ShapeViolation(t, "the block language is over single-tape letters")
    letters = set(ig.terminals) | set(alphabet)
    clash = sorted(letters & {left, right, SEPARATOR})
    if clash:
        raise AlphabetClash(clash)
    ys = sorted(letters) + [left, right]
    taken = set(ig.nonterminals) | set(ys)
    suffix = _fresh_suffix(ig.nonterminals, taken)
    rev = ig_rename(ig_reverse(ig), suffix)
    taken |= set(rev.nonterminals)
    hub = fresh_name("I", taken)
    s, s_rev, i = NonterminalRef(ig.start), NonterminalRef(rev.start), NonterminalRef(hub)

    prods: List[IndexedProduction] = list(ig.productions) + list(rev.productions)
    prods += [indexed_production(hub, (y, i, y)) for y in ys]
    prods += [
        IndexedProduction(hub, (left, s, right, i, right, left), None, 1),
        IndexedProduction(hub, (left, right, i, right, s_rev, left), None, 0),
        IndexedProduction(hub, (left, s, right, i, right, s_rev, left), None, 1),
        indexed_production(hub, (SEPARATOR,)),
    ]
    out = make_indexed_grammar(
        prods, hub,
        terminals=set(ys) | {SEPARATOR},
        flags=ig.flags,
        nonterminals=set(ig.nonterminals) | set(rev.nonterminals) | {hub},
    )
    return ig_to_cfg(out) if lifted else out


def wp_block_sample(
    congruence: BlockCongruence, alphabet: Sequence[str], bound: int
) -> RelationSample:
    """Muestra del problema de la palabra dado por una congruencia por bloques"""
    return sample_from_classifier(all_words(alphabet, bound), congruence.key, bound)


# ================================
# REPORTES Y REGISTRO
# ================================

def _verdict(equal: bool, complete: bool) -> Verdict:
    if equal and complete:
        return Verdict.VERIFIED
    if not equal and complete:
        return Verdict.MISMATCH
    return Verdict.UNVERIFIED


def _sample_check(source: Any, output: Any, c: "Construction", bound: int, steps: int, **_):
    expected, complete_in = relation_sample(source, c.source_view, bound, steps)
    actual, complete_out = relation_sample(output, c.target_view, bound, steps)
    return sample_equal(expected, actual), complete_in and complete_out, []


def _homomorphism_check(source: Any, output: Any, c: "Construction", bound: int, steps: int, h=None, viewpoint=Viewpoint.PLAIN, **_):
    viewpoint = Viewpoint(viewpoint)
    hm = _as_map(h or {})
    budget = LengthBudget(viewpoint, bound)
    if isinstance(source, RelationSample):
        expected = source.image(hm)
        return sample_equal(expected, output), True, []
    if isinstance(source, (set, frozenset, list)):
        words = frozenset(image_word(w, hm) for w in source)
        return compare_word_sets(words, output, bound), True, []
    slack = settings.HOMOMORPHISM_SLACK
    erasing = any(len(v) == 0 for v in hm.values())
    pre = enumerate_words(source, bound + (slack if erasing else 0), viewpoint, steps)
    images = {image_word(w, hm) for w in pre.words}
    expected_words = {w for w in images if budget.admits(w)}
    post = enumerate_words(output, bound, viewpoint, steps)
    comparison = compare_word_sets(expected_words, post.words, bound)
    complete = pre.complete and post.complete
    notes = []
    if erasing:
        notes.append(f"erasing homomorphism checked with preimages up to bound {bound + slack}")
        # una imagen corta puede venir de una preimagen más larga que la cota
        if comparison.only_in_second and not comparison.only_in_first:
            complete = False
            notes.append(f"{len(comparison.only_in_second)} output words have no preimage within the bound")
    return comparison, complete, notes


def _wp_two_tape_check(source: Any, output: Any, c: "Construction", bound: int, steps: int, alphabet=(), left=None, right=None, **_):
    left, right = _markers(left, right)
    rho, complete = relation_sample(source, Viewpoint.TWO_TAPE, bound, steps)
    ig = ig_from_cfg(source) if isinstance(source, ContextFreeGrammar) else source
    ys = sorted(_letters_of(ig.terminals) | set(alphabet)) + [left, right]
    expected = wp_block_sample(BlockCongruence(rho.pairs, left, right), ys, bound)
    actual, complete_out = relation_sample(output, Viewpoint.TWO_TAPE, bound, steps)
    return sample_equal(expected, actual), complete and complete_out, []


def _wp_unfolded_check(source: Any, output: Any, c: "Construction", bound: int, steps: int, alphabet=(), left=None, right=None, **_):
    left, right = _markers(left, right)
    lang = enumerate_words(source, bound, Viewpoint.PLAIN, steps)
    ig = ig_from_cfg(source) if isinstance(source, ContextFreeGrammar) else source
    ys = sorted(set(ig.terminals) | set(alphabet)) + [left, right]
    expected = wp_block_sample(BlockCongruence.for_language(lang.words, left, right), ys, bound)
    actual, complete_out = relation_sample(output, Viewpoint.UNFOLDED, bound, steps)
    return sample_equal(expected, actual), lang.complete and complete_out, []


@dataclass(frozen=True)
class Construction:
    name: str
    build: Callable[..., Any]
    source_view: Viewpoint
    target_view: Viewpoint
    check: Callable[..., Any] = _sample_check
    notes: Tuple[str, ...] = field(default_factory=tuple)


CONSTRUCTIONS: Dict[str, Construction] = {
    c.name: c for c in (
        Construction(
            "u2t-reg", unfolded_regular_to_two_tape, Viewpoint.UNFOLDED, Viewpoint.TWO_TAPE,
            notes=("output uses A -> B (.,a) after #; validated as mirrored-regular, not left-regular",),
        ),
        Construction("u2t-oca", unfolded_oca_to_two_tape, Viewpoint.UNFOLDED, Viewpoint.TWO_TAPE),
        Construction("u2t-indexed", unfolded_indexed_to_two_tape, Viewpoint.UNFOLDED, Viewpoint.TWO_TAPE),
        Construction("t2u-edt0l", two_tape_edt0l_to_unfolded, Viewpoint.TWO_TAPE, Viewpoint.UNFOLDED),
        Construction("t2u-reg-cfg", two_tape_regular_to_unfolded_cfg, Viewpoint.TWO_TAPE, Viewpoint.UNFOLDED),
        Construction("t2u-cfg-lig", two_tape_cfg_to_unfolded_lig, Viewpoint.TWO_TAPE, Viewpoint.UNFOLDED),
        Construction("unary-trans-oca", unary_transducer_to_unfolded_oca, Viewpoint.TWO_TAPE, Viewpoint.UNFOLDED),
        Construction("split-pairs", split_pair_letters, Viewpoint.TWO_TAPE, Viewpoint.TWO_TAPE),
        Construction(
            "homomorphism", apply_homomorphism, Viewpoint.PLAIN, Viewpoint.PLAIN, check=_homomorphism_check,
        ),
        Construction(
            "wp-two-tape", monoid_two_tape_wp, Viewpoint.TWO_TAPE, Viewpoint.TWO_TAPE, check=_wp_two_tape_check,
            notes=("rewritten blocks are iterated: (Y2 | (l,l) K (r,r))*, K = rho | rho^-1 | identity",),
        ),
        Construction(
            "wp-unfolded", monoid_unfolded_wp_indexed, Viewpoint.PLAIN, Viewpoint.UNFOLDED, check=_wp_unfolded_check,
            notes=("adds I -> l S r I r S' l so that blocks of two words of L are related",),
        ),
    )
}


_BUILD_OPTIONS = {
    "homomorphism": ("h",),
    "wp-two-tape": ("alphabet", "left", "right"),
    "wp-unfolded": ("alphabet", "left", "right"),
}


def run_construction(
    name: str,
    source: Any,
    bound: Optional[int] = None,
    steps: Optional[int] = None,
    verify: Optional[bool] = None,
    **options: Any,
) -> ConstructionReport:
    """Construye por nombre y verifica la salida contra la entrada en la cota dada"""
    if name not in CONSTRUCTIONS:
        raise UnknownFormalism(f"unknown construction {name!r}")
    c = CONSTRUCTIONS[name]
    bound = settings.DEFAULT_BOUND if bound is None else bound
    steps = settings.DEFAULT_STEPS if steps is None else steps
    verify = settings.VERIFY_CONSTRUCTIONS if verify is None else verify
    build_kwargs = {k: v for k, v in options.items() if k in _BUILD_OPTIONS.get(name, ()) and v is not None}
    output = c.build(source, **build_kwargs)

    comparison = None
    complete = True
    notes = list(c.notes)
    verdict = Verdict.UNVERIFIED
    if verify:
        comparison, complete, extra = c.check(source, output, c, bound, steps, **options)
        notes += extra
        verdict = _verdict(comparison.equal, complete)
        if not complete:
            notes.append(f"enumeration hit the step budget ({steps}); result is not conclusive")
    report = ConstructionReport(
        construction=name,
        input_summary=summarize(source),
        output_summary=summarize(output),
        checked_bound=bound,
        verdict=verdict,
        comparison=comparison,
        complete=complete,
        notes=notes,
        output=output,
    )
    if verdict == Verdict.MISMATCH:
        logger.warning("%s: salida distinta de la entrada en cota %d", name, bound)
    else:
        logger.info("%s: %s (cota %d)", name, verdict.value, bound)
    return report
