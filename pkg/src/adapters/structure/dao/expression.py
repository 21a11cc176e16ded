from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Iterable
import logging

from lark import Lark, Transformer, Tree
from lark.exceptions import UnexpectedInput

from src.adapters.network.dao.codec import SourceSpan
from src.adapters.network.dto import State
from src.exceptions import ParseError

# up{(a1,...,ad),...} is the upward closure of a finite set of states
EXPRESSION_GRAMMAR = r"""
?start: or_expr

?or_expr: and_expr ("|" and_expr)*
?and_expr: not_expr ("&" not_expr)*
?not_expr: "!" not_expr      -> negation
         | atom

?atom: "true"                            -> true
     | "false"                           -> false
     | "up" "{" (vector ("," vector)*)? "}" -> up
     | "(" or_expr ")"

vector: "(" INT ("," INT)* ")"

%import common.INT
%import common.WS
%ignore WS
"""


class AbstractSetExpressionCodec(ABC):
    @abstractmethod
    def render_up(self, antichain: Iterable[State]) -> str:
        raise NotImplementedError()

    @abstractmethod
    def evaluate(self, expression: str, x: State) -> bool:
        """
        Evaluates a set expression at a state.
        :param expression: boolean combination of up{...} atoms with |, &, !, true, false
        :param x: state to test
        :return: membership of x
        """
        raise NotImplementedError()

    def render_union(self, *antichains: Iterable[State]) -> str:
        terms = [self.render_up(a) for a in antichains if list(a)]
        return " | ".join(terms) if terms else "false"

    def render_complement(self, expression: str) -> str:
        if expression == "false":
            return "true"
        if expression == "true":
            return "false"
        return f"!({expression})"

    def render_difference(self, included: Iterable[State], excluded: Iterable[State]) -> str:
        included, excluded = list(included), list(excluded)
        if not included:
            return "false"
        if not excluded:
            return self.render_up(included)
        return f"{self.render_up(included)} & !{self.render_up(excluded)}"


class _Evaluator(Transformer):
    def __init__(self, x: State):
        super().__init__()
        self._x = tuple(x)

    def or_expr(self, items):
        return any(items)

    def and_expr(self, items):
        return all(items)

    def negation(self, items):
        return not items[0]

    def true(self, _):
        return True

    def false(self, _):
        return False

    def vector(self, items):
        return tuple(int(tok) for tok in items)

    def up(self, vectors):
        for v in vectors:
            if len(v) != len(self._x):
                raise ValueError(f"state dimension {len(self._x)} does not match atom {v}")
        return any(all(a >= b for a, b in zip(self._x, v)) for v in vectors)


class LarkSetExpressionCodec(AbstractSetExpressionCodec):
    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger(__name__)
        self._parser = Lark(EXPRESSION_GRAMMAR, parser="lalr", maybe_placeholders=False)
        self._parse_cached = lru_cache(maxsize=256)(self._parse)

    def render_up(self, antichain: Iterable[State]) -> str:
        points = sorted(tuple(p) for p in antichain)
        if not points:
            return "false"
        return "up{" + ",".join("(" + ",".join(str(c) for c in p) + ")" for p in points) + "}"

    def _parse(self, expression: str) -> Tree:
        try:
            return self._parser.parse(expression)
        except UnexpectedInput as e:
            column = e.column if isinstance(e.column, int) and e.column > 0 else max(len(expression), 1)
            raise ParseError(
                "malformed set expression", SourceSpan(line=1, column=column), "syntax"
            ) from None

    def evaluate(self, expression: str, x: State) -> bool:
        return bool(_Evaluator(x).transform(self._parse_cached(expression)))
