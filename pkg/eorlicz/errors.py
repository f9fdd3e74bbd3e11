# -*- coding: utf-8 -*-
# errors.py - Hierarquia de exceções do pacote eorlicz

from typing import Any, Optional, Sequence


class EOrliczError(Exception):
    """ Raiz de todos os erros do pacote. """


# --- Linguagem de expressões ---

class ParseError(EOrliczError):
    """ Erro de sintaxe ou identificador desconhecido, com a posição no texto-fonte. """

    def __init__(self, message: str, source: str, offset: int, expected: Sequence[str] = ()):
        self.source = source
        self.offset = offset
        # Posição em bytes (UTF-8), útil para fontes com caracteres como '≤'
        self.byte_offset = len(source[:offset].encode("utf-8"))
        self.expected = tuple(sorted(expected))
        detail = f" (esperado: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} na posição {self.byte_offset}{detail}")


class EvalError(EOrliczError):
    """ Falha na avaliação de uma expressão. """


class DomainError(EvalError):
    """ Forma indefinida: ln de não-positivo, 0/0, inf-inf, resultado -inf, ... """


class UnboundVariableError(EvalError):
    pass


class CompositionError(EvalError):
    """ Erro na avaliação de Psi = Phi(E), marcado com o estágio que falhou. """

    def __init__(self, stage: str, cause: EvalError):
        self.stage = stage
        self.cause = cause
        super().__init__(f"estágio {stage}: {cause}")


# --- Espaço de medida e integração ---

class MeasureError(EOrliczError):
    pass


class IntegrationError(EOrliczError):
    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"erro de avaliação no nó {index}: {cause}")


class GridTooSmallError(MeasureError):
    pass


# --- Normas ---

class PreconditionError(EOrliczError):
    """ Pré-condição violada; 'witness' guarda a evidência numérica. """

    def __init__(self, message: str, witness: Optional[Any] = None):
        self.witness = witness
        super().__init__(message)


class BracketOverflowError(EOrliczError):
    pass


# --- Catálogo e CLI ---

class UnknownFixtureError(EOrliczError):
    pass


class SpecFileError(EOrliczError):
    pass
