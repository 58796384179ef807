"""
Decisores de problemas de la palabra: grupos libres de rango 1 y 2, y las
congruencias por bloques de los monoides M[ρ] y M(L).

Un bloque es un factor ℓwr con w sin marcadores. En M[ρ] y M(L) dos palabras
son iguales si tienen el mismo esqueleto de marcadores, coinciden fuera de los
bloques y los contenidos de bloques correspondientes son equivalentes.
"""

from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from core.config import settings
from core.logger import get_logger
from core.words import Pair, Word, word_key

logger = get_logger(__name__)

FREE_GROUP_INVERSES: Dict[str, str] = {"x": "X", "X": "x", "y": "Y", "Y": "y"}


# ================================
# GRUPOS LIBRES
# ================================

def signed_count(word: Sequence[str], letter: str = "x", inverse: str = "X") -> int:
    return sum(1 for s in word if s == letter) - sum(1 for s in word if s == inverse)


def free_reduce(word: Sequence[str], inverses: Mapping[str, str] = FREE_GROUP_INVERSES) -> Word:
    """Forma reducida: se cancelan pares adyacentes a a⁻¹"""
    stack: List[str] = []
    for s in word:
        if stack and inverses.get(stack[-1]) == s:
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


# ================================
# CONGRUENCIAS POR BLOQUES
# ================================

class _UnionFind:
    def __init__(self):
        self.parent: Dict[Word, Word] = {}

    def find(self, w: Word) -> Word:
        self.parent.setdefault(w, w)
        root = w
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[w] != root:
            self.parent[w], w = root, self.parent[w]
        return root

    def union(self, a: Word, b: Word) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # la raíz es el menor representante en orden longitud-lexicográfico
        if word_key(rb) < word_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra


class BlockCongruence:
    """Igualdad en ⟨X, ℓ, r | ℓur = ℓvr (u ρ v)⟩, relativa a los pares conocidos de ρ"""

    def __init__(self, pairs: Iterable[Pair], left: Optional[str] = None, right: Optional[str] = None):
        self.left = left or settings.LEFT_MARKER
        self.right = right or settings.RIGHT_MARKER
        self._classes = _UnionFind()
        count = 0
        for u, v in pairs:
            self._classes.union(tuple(u), tuple(v))
            count += 1
        logger.debug("BlockCongruence: %d pares generadores", count)

    @classmethod
    def for_language(cls, words: Iterable[Sequence[str]], left: Optional[str] = None, right: Optional[str] = None) -> "BlockCongruence":
        """M(L): cada w ∈ L se identifica con la palabra vacía dentro de un bloque"""
        return cls(((tuple(w), ()) for w in words), left, right)

    def canonical(self, content: Word) -> Word:
        if content in self._classes.parent:
            return self._classes.find(content)
        return content

    def key(self, word: Sequence[str]) -> Tuple[Hashable, ...]:
        word = tuple(word)
        out: List[Hashable] = []
        i = 0
        while i < len(word):
            s = word[i]
            if s != self.left:
                out.append(s)
                i += 1
                continue
            j = i + 1
            while j < len(word) and word[j] not in (self.left, self.right):
                j += 1
            if j < len(word) and word[j] == self.right:
                out.append(("block", self.canonical(word[i + 1:j])))
                i = j + 1
            else:
                out.append(s)
                i += 1
        return tuple(out)

    def equivalent(self, u: Sequence[str], v: Sequence[str]) -> bool:
        return self.key(u) == self.key(v)
