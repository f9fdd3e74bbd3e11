# -*- coding: utf-8 -*-
# exprlang.py - Linguagem de expressões para Phi e E
# Gramática LALR (lark), AST imutável, aritmética em reais estendidos (finito ou +inf)
# e composição Psi(t, u) = Phi(E_t(t, u), E_u(t, u)).

from __future__ import annotations

import math
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Mapping, Optional, Tuple

from lark import Lark, Transformer, Token, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken, VisitError

from .errors import CompositionError, DomainError, EvalError, ParseError, UnboundVariableError

logger = logging.getLogger(__name__)

# =================================================================
# 1. REAIS ESTENDIDOS
# =================================================================

INF = math.inf

# Um ExtReal é um float finito ou +inf. -inf e NaN nunca saem das operações abaixo.
ExtReal = float


def ext_check(x: float) -> ExtReal:
    if x != x:
        raise DomainError("forma indefinida (NaN)")
    if x == -INF:
        raise DomainError("-inf não é representável")
    return x


def ext_add(a: ExtReal, b: ExtReal) -> ExtReal:
    return ext_check(a + b)


def ext_sub(a: ExtReal, b: ExtReal) -> ExtReal:
    if b == INF:
        raise DomainError("inf - inf" if a == INF else "subtração de +inf")
    return ext_check(a - b)


def ext_mul(a: ExtReal, b: ExtReal) -> ExtReal:
    # Convenção da teoria da medida: 0 * inf = 0
    if a == 0.0 or b == 0.0:
        return 0.0
    return ext_check(a * b)


def ext_div(a: ExtReal, b: ExtReal) -> ExtReal:
    if b == 0.0:
        raise DomainError("0/0" if a == 0.0 else "divisão por zero")
    if a == INF and b == INF:
        raise DomainError("inf/inf")
    return ext_check(a / b)


def ext_neg(a: ExtReal) -> ExtReal:
    return ext_check(-a)


def ext_pow(a: ExtReal, b: ExtReal) -> ExtReal:
    if b == 0.0:
        return 1.0  # inclui 0^0 = 1
    if a == INF:
        return INF if b > 0 else 0.0
    if b == INF:
        if a > 1.0:
            return INF
        if a == 1.0:
            return 1.0
        if a >= 0.0:
            return 0.0
        raise DomainError("base negativa com expoente infinito")
    if a < 0.0 and not float(b).is_integer():
        raise DomainError(f"base negativa {a} com expoente não inteiro {b}")
    if a == 0.0 and b < 0.0:
        raise DomainError("0 elevado a expoente negativo")
    try:
        return ext_check(math.pow(a, b))
    except OverflowError:
        if a < 0.0 and float(b) % 2 == 1:
            raise DomainError("estouro para -inf")
        return INF


def _ext_exp(x: ExtReal) -> ExtReal:
    if x == INF:
        return INF
    try:
        return math.exp(x)
    except OverflowError:
        return INF


def _ext_expm1(x: ExtReal) -> ExtReal:
    if x == INF:
        return INF
    try:
        return math.expm1(x)
    except OverflowError:
        return INF


def _ext_ln(x: ExtReal) -> ExtReal:
    if x <= 0.0:
        raise DomainError(f"ln de valor não positivo ({x})")
    return INF if x == INF else math.log(x)


def _ext_log1p(x: ExtReal) -> ExtReal:
    # ln(1 + x) sem perda de precisão para x pequeno
    if x <= -1.0:
        raise DomainError(f"ln de valor não positivo ({1.0 + x})")
    return INF if x == INF else math.log1p(x)


def _ext_cosh(x: ExtReal) -> ExtReal:
    if x == INF:
        return INF
    try:
        return math.cosh(x)
    except OverflowError:
        return INF


def _ext_cosh_m1(x: ExtReal) -> ExtReal:
    # cosh(x) - 1 = 2 sinh(x/2)^2, sem cancelamento perto de 0
    if x == INF:
        return INF
    try:
        s = math.sinh(x / 2.0)
    except OverflowError:
        return INF
    return 2.0 * s * s


def _ext_sqrt(x: ExtReal) -> ExtReal:
    if x < 0.0:
        raise DomainError(f"raiz quadrada de negativo ({x})")
    return INF if x == INF else math.sqrt(x)


BINARY_OPS: Dict[str, Callable[[ExtReal, ExtReal], ExtReal]] = {
    "+": ext_add,
    "-": ext_sub,
    "*": ext_mul,
    "/": ext_div,
    "^": ext_pow,
}

# nome -> (função, aridade mínima, aridade máxima)
FUNCTIONS: Dict[str, Tuple[Callable[..., ExtReal], int, int]] = {
    "exp": (_ext_exp, 1, 1),
    "ln": (_ext_ln, 1, 1),
    "log": (_ext_ln, 1, 1),
    "abs": (abs, 1, 1),
    "cosh": (_ext_cosh, 1, 1),
    "sqrt": (_ext_sqrt, 1, 1),
    "min": (min, 1, 32),
    "max": (max, 1, 32),
}

COMPARISONS: Dict[str, Callable[[ExtReal, ExtReal], bool]] = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "=": lambda a, b: a == b,
}

VARIABLES = frozenset({"t", "u", "p"})

# Função compilada: (t, u, p) -> ExtReal; None marca variável não ligada
Compiled = Callable[[Optional[float], Optional[float], Optional[float]], ExtReal]

# =================================================================
# 2. AST
# =================================================================


class Expr:
    """ Nó da AST. Subclasses são dataclasses congeladas (igualdade estrutural). """

    def variables(self) -> FrozenSet[str]:
        raise NotImplementedError

    def _compile(self) -> Compiled:
        raise NotImplementedError

    @cached_property
    def compiled(self) -> Compiled:
        return self._compile()


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def __str__(self) -> str:
        if self.value == INF:
            return "inf"
        if self.value < 0:
            return f"(-{-self.value!r})"
        return repr(float(self.value))

    def variables(self) -> FrozenSet[str]:
        return frozenset()

    def _compile(self) -> Compiled:
        value = float(self.value)
        return lambda t, u, p: value


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __str__(self) -> str:
        return self.name

    def variables(self) -> FrozenSet[str]:
        return frozenset({self.name})

    def _compile(self) -> Compiled:
        position = ("t", "u", "p").index(self.name)
        name = self.name

        def lookup(t, u, p):
            value = (t, u, p)[position]
            if value is None:
                raise UnboundVariableError(f"variável '{name}' não ligada")
            return value

        return lookup


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"

    def variables(self) -> FrozenSet[str]:
        return self.left.variables() | self.right.variables()

    def _compile(self) -> Compiled:
        # exp(x) - 1 e cosh(x) - 1 avaliados sem cancelamento catastrófico
        if (self.op == "-" and self.right == Num(1.0)
                and isinstance(self.left, Call) and self.left.name in ("exp", "cosh")):
            inner = self.left.args[0].compiled
            fn_m1 = _ext_expm1 if self.left.name == "exp" else _ext_cosh_m1
            return lambda t, u, p: fn_m1(inner(t, u, p))

        fn = BINARY_OPS[self.op]
        left, right = self.left.compiled, self.right.compiled
        return lambda t, u, p: fn(left(t, u, p), right(t, u, p))


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def __str__(self) -> str:
        return f"(-{self.operand})"

    def variables(self) -> FrozenSet[str]:
        return self.operand.variables()

    def _compile(self) -> Compiled:
        operand = self.operand.compiled
        return lambda t, u, p: ext_neg(operand(t, u, p))


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: Tuple[Expr, ...]

    def __str__(self) -> str:
        return f"{self.name}({', '.join(str(a) for a in self.args)})"

    def variables(self) -> FrozenSet[str]:
        return frozenset().union(*(a.variables() for a in self.args))

    def _compile(self) -> Compiled:
        fn = FUNCTIONS[self.name][0]
        compiled_args = tuple(a.compiled for a in self.args)
        inner = self.args[0]
        if (self.name in ("ln", "log") and isinstance(inner, BinOp)
                and inner.op == "+" and inner.right == Num(1.0)):
            shifted = inner.left.compiled
            return lambda t, u, p: _ext_log1p(shifted(t, u, p))
        if self.name in ("ln", "log") and isinstance(inner, Call) and inner.name == "exp":
            # ln(exp(x)) = x: sem arredondar exp(x) para 1 quando x é pequeno, nem estourar quando é grande
            return inner.args[0].compiled
        if self.name not in ("min", "max"):
            arg = compiled_args[0]
            return lambda t, u, p: fn(arg(t, u, p))
        return lambda t, u, p: fn([a(t, u, p) for a in compiled_args])


@dataclass(frozen=True)
class Cond:
    op: str
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"

    def variables(self) -> FrozenSet[str]:
        return self.left.variables() | self.right.variables()

    def compile(self) -> Callable[[Optional[float], Optional[float], Optional[float]], bool]:
        cmp = COMPARISONS[self.op]
        left, right = self.left.compiled, self.right.compiled
        return lambda t, u, p: cmp(left(t, u, p), right(t, u, p))


@dataclass(frozen=True)
class Piecewise(Expr):
    branches: Tuple[Tuple[Cond, Expr], ...]
    otherwise: Expr

    def __str__(self) -> str:
        parts = [f"{cond}, {expr}" for cond, expr in self.branches]
        return f"piecewise({', '.join(parts)}, {self.otherwise})"

    def variables(self) -> FrozenSet[str]:
        names = self.otherwise.variables()
        for cond, expr in self.branches:
            names = names | cond.variables() | expr.variables()
        return names

    def _compile(self) -> Compiled:
        branches = tuple((cond.compile(), expr.compiled) for cond, expr in self.branches)
        otherwise = self.otherwise.compiled

        def select(t, u, p):
            # Primeiro ramo verdadeiro vence
            for cond, expr in branches:
                if cond(t, u, p):
                    return expr(t, u, p)
            return otherwise(t, u, p)

        return select


# =================================================================
# 3. PARSER
# =================================================================

GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> sub

    ?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

    ?unary: power
        | "-" unary         -> neg

    ?power: atom
        | atom "^" unary    -> pow

    ?atom: NUMBER           -> number
         | NAME             -> var
         | NAME "(" arg ("," arg)* ")" -> call
         | "(" sum ")"

    ?arg: sum
        | sum COMP sum      -> cond

    COMP: /<=|>=|≤|≥|<|>|=/
    NAME: /[A-Za-z_][A-Za-z_0-9]*/

    %import common.NUMBER
    %import common.WS
    %ignore WS
"""

_COMP_ALIASES = {"≤": "<=", "≥": ">="}

_PARSER = Lark(GRAMMAR, parser="lalr")


@v_args(inline=True)
class _BuildAst(Transformer):
    """ Converte a árvore do lark em nós Expr, validando identificadores. """

    def __init__(self, source: str):
        super().__init__()
        self.source = source

    def number(self, token: Token) -> Expr:
        return Num(float(token))

    def var(self, token: Token) -> Expr:
        name = str(token)
        if name == "inf":
            return Num(INF)
        if name not in VARIABLES:
            raise ParseError(f"identificador desconhecido '{name}'", self.source, token.start_pos)
        return Var(name)

    def add(self, left, right):
        return BinOp("+", left, right)

    def sub(self, left, right):
        return BinOp("-", left, right)

    def mul(self, left, right):
        return BinOp("*", left, right)

    def div(self, left, right):
        return BinOp("/", left, right)

    def pow(self, left, right):
        return BinOp("^", left, right)

    def neg(self, operand):
        return Neg(operand)

    def cond(self, left, op: Token, right):
        return Cond(_COMP_ALIASES.get(str(op), str(op)), left, right)

    def call(self, token: Token, *args):
        name = str(token)
        if name == "piecewise":
            return self._piecewise(token, args)
        if name not in FUNCTIONS:
            raise ParseError(f"função desconhecida '{name}'", self.source, token.start_pos)
        if any(isinstance(a, Cond) for a in args):
            raise ParseError(f"condição fora de piecewise em '{name}'", self.source, token.start_pos)
        _, min_args, max_args = FUNCTIONS[name]
        if not min_args <= len(args) <= max_args:
            raise ParseError(f"'{name}' recebe {min_args}..{max_args} argumentos, recebeu {len(args)}",
                             self.source, token.start_pos)
        return Call(name, tuple(args))

    def _piecewise(self, token: Token, args) -> Expr:
        # piecewise(c1, e1, c2, e2, ..., senão)
        *pairs, otherwise = args
        ok = len(pairs) >= 2 and len(pairs) % 2 == 0 and not isinstance(otherwise, Cond)
        branches = []
        for cond, expr in zip(pairs[0::2], pairs[1::2]):
            ok = ok and isinstance(cond, Cond) and not isinstance(expr, Cond)
            branches.append((cond, expr))
        if not ok:
            raise ParseError("piecewise espera (condição, expressão)+ seguido de expressão final",
                             self.source, token.start_pos)
        return Piecewise(tuple(branches), otherwise)


def parse(source: str) -> Expr:
    """ Converte o texto da DSL em AST. Erros trazem posição (bytes) e tokens esperados. """
    if not source or not source.strip():
        raise ParseError("expressão vazia", source or "", 0)
    try:
        tree = _PARSER.parse(source)
    except UnexpectedToken as e:
        offset = len(source) if e.token.type == "$END" else e.token.start_pos
        raise ParseError(f"token inesperado '{e.token}'", source, offset, e.expected) from None
    except UnexpectedCharacters as e:
        raise ParseError(f"caractere inesperado '{source[e.pos_in_stream]}'", source,
                         e.pos_in_stream, e.allowed or ()) from None
    except UnexpectedInput as e:
        raise ParseError("entrada inesperada", source, len(source)) from None
    try:
        expr = _BuildAst(source).transform(tree)
    except VisitError as e:
        raise e.orig_exc from None
    if isinstance(expr, Cond):
        raise ParseError("condição fora de piecewise", source, 0)
    return expr


def unparse(expr: Expr) -> str:
    """ Texto canônico da expressão; parse(unparse(e)) == e. """
    return str(expr)


def evaluate(expr: Expr, env: Mapping[str, float]) -> ExtReal:
    """ Avalia a expressão no ambiente {t, u, p}. Variáveis ausentes só falham se usadas. """
    return expr.compiled(env.get("t"), env.get("u"), env.get("p"))


# =================================================================
# 4. COMPOSIÇÃO Psi = Phi o E
# =================================================================

IDENTITY_SOURCES = ("t", "u")


@dataclass(frozen=True)
class ComposedFunction:
    """ Psi(t, u) = Phi(E_t(t, u), E_u(t, u)), avaliada por estágios, nunca por substituição textual. """

    phi: Expr
    e_t: Expr
    e_u: Expr
    p: Optional[float] = None

    def __call__(self, t: float, u: float) -> ExtReal:
        p = self.p
        try:
            inner_t = self.e_t.compiled(t, u, p)
            inner_u = self.e_u.compiled(t, u, p)
        except EvalError as e:
            raise CompositionError("inner", e) from None
        try:
            return self.phi.compiled(inner_t, inner_u, p)
        except EvalError as e:
            raise CompositionError("outer", e) from None

    def sources(self) -> Dict[str, object]:
        return {"phi": str(self.phi), "E": [str(self.e_t), str(self.e_u)], "p": self.p}


def compose(phi: Expr, e_t: Expr, e_u: Expr, p: Optional[float] = None) -> ComposedFunction:
    """ Monta Psi = Phi(E). O parâmetro p é obrigatório se alguma expressão o usar. """
    used = phi.variables() | e_t.variables() | e_u.variables()
    unknown = used - VARIABLES
    if unknown:
        raise UnboundVariableError(f"variáveis desconhecidas: {sorted(unknown)}")
    if "p" in used and p is None:
        raise UnboundVariableError("a expressão usa o parâmetro 'p' mas nenhum valor foi fornecido")
    return ComposedFunction(phi, e_t, e_u, None if p is None else float(p))


def compose_sources(phi: str, e: Tuple[str, str], p: Optional[float] = None) -> ComposedFunction:
    """ Atalho: compõe a partir dos textos da DSL. """
    return compose(parse(phi), parse(e[0]), parse(e[1]), p)
