"""
Jerarquía de errores de relkit.
Cada error lleva un detalle legible y el código de salida que usa el CLI
(2 = entrada inválida, 1 = verificación fallida).
"""

from typing import Any, Optional


class RelkitError(Exception):
    """Error base: detalle + código de salida"""

    exit_code: int = 2

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return self.detail


class FormatError(RelkitError):
    """Archivo de gramática/autómata mal escrito"""

    def __init__(self, detail: str, line: Optional[int] = None, source: Optional[str] = None):
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(f"{where}{detail}")
        self.line = line
        self.source = source


class UnknownFormalism(RelkitError):
    pass


class FoldError(RelkitError):
    """La palabra desplegada no tiene exactamente un #"""

    def __init__(self, word: Any):
        super().__init__(f"unfolded word must contain exactly one '#': {word!r}")
        self.word = word


class BoundMismatch(RelkitError):
    def __init__(self, first: int, second: int):
        super().__init__(f"samples have different bounds: {first} != {second}")
        self.first = first
        self.second = second


class NotLeftRegular(RelkitError):
    def __init__(self, production: Any):
        super().__init__(f"production is not left-regular: {production}")
        self.production = production


class LanguageNotShaped(RelkitError):
    """El lenguaje contiene una palabra sin exactamente un #"""

    def __init__(self, witness: Any):
        super().__init__(f"language is not contained in X*#X*, witness: {witness}")
        self.witness = witness


class ShapeViolation(RelkitError):
    def __init__(self, production: Any, reason: str):
        super().__init__(f"shape violation in {production}: {reason}")
        self.production = production
        self.reason = reason


class MalformedProduction(RelkitError):
    def __init__(self, production: Any, reason: str):
        super().__init__(f"malformed production {production}: {reason}")
        self.production = production
        self.reason = reason


class NotDeterministic(RelkitError):
    def __init__(self, table: str, symbol: Any):
        super().__init__(f"table {table!r} has several productions for {symbol!r}")
        self.table = table
        self.symbol = symbol


class GuardedInput(RelkitError):
    """La construcción necesita un contador ciego (sin test de cero)"""

    def __init__(self, detail: str = "construction requires a blind counter automaton"):
        super().__init__(detail)


class NonUnaryLabel(RelkitError):
    def __init__(self, label: Any):
        super().__init__(f"transducer label is not unary over a single letter: {label}")
        self.label = label


class AlphabetClash(RelkitError):
    def __init__(self, symbols: Any):
        super().__init__(f"marker symbols already used by the alphabet: {symbols}")
        self.symbols = symbols


class UnknownZooEntry(RelkitError):
    def __init__(self, name: str):
        super().__init__(f"unknown zoo entry: {name}")
        self.name = name


class VerificationMismatch(RelkitError):
    """La muestra de salida no coincide con la de entrada"""

    exit_code = 1

    def __init__(self, report: Any):
        super().__init__("construction output does not match its input on the bounded sample")
        self.report = report
