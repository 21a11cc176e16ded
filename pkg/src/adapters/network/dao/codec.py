from abc import ABC, abstractmethod
from fractions import Fraction
from pathlib import Path
from typing import Mapping
import logging

from pydantic import BaseModel, ConfigDict, Field
from lark import Lark, Transformer, Token, v_args
from lark.exceptions import UnexpectedInput, UnexpectedToken, UnexpectedCharacters, VisitError

from src.adapters.network.dto import Reaction, ReactionNetwork, format_rational, to_fraction
from src.exceptions import ParseError

GRAMMAR = r"""
?start: species_decl
      | reaction

species_decl: "species" ":" NAME ("," NAME)*

reaction: complex ARROW complex "@" rate ("," rate)?

complex: ZERO               -> empty_complex
       | term ("+" term)*   -> sum_complex

term: INT? NAME

rate: SIGNED_NUMBER ("/" INT)?   -> number_rate
    | NAME                       -> named_rate

ARROW: "<->" | "->"
ZERO: "0"
NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.INT
%import common.SIGNED_NUMBER
%import common.WS_INLINE
%ignore WS_INLINE
"""


class SourceSpan(BaseModel):
    model_config = ConfigDict(frozen=True)

    line: int = Field(ge=1)
    column: int = Field(ge=1)
    length: int = Field(default=1, ge=1)


def _span(token: Token, line: int) -> SourceSpan:
    return SourceSpan(line=line, column=max(token.column or 1, 1), length=max(len(token), 1))


class AbstractNetworkCodec(ABC):
    @abstractmethod
    def parse(self, text: str, rates: Mapping[str, object] | None = None) -> ReactionNetwork:
        """
        Parses reaction network text.
        :param text: one reaction per line, '#' comments, optional 'species:' header
        :param rates: values for symbolic rate names used in the text
        :return: network with species in order of first appearance (or header order)
        """
        raise NotImplementedError()

    @abstractmethod
    def serialize(self, network: ReactionNetwork) -> str:
        raise NotImplementedError()


class _LineTransformer(Transformer):
    """Turns one parsed line into ('species', names) or ('reaction', parts)."""

    def __init__(self, line: int, rates: Mapping[str, object]):
        super().__init__()
        self._line = line
        self._rates = rates

    def species_decl(self, items):
        return "species", [(str(tok), _span(tok, self._line)) for tok in items]

    def empty_complex(self, items):
        return [], _span(items[0], self._line)

    def sum_complex(self, items):
        first_span = items[0][2]
        return [(name, coeff, span) for coeff, name, span in items], first_span

    def term(self, items):
        if len(items) == 2:
            coeff_tok, name_tok = items
            coeff = int(coeff_tok)
            if coeff == 0:
                raise ParseError("zero stoichiometric coefficient", _span(coeff_tok, self._line), "syntax")
            return coeff, str(name_tok), _span(coeff_tok, self._line)
        name_tok = items[0]
        return 1, str(name_tok), _span(name_tok, self._line)

    def number_rate(self, items):
        span = _span(items[0], self._line)
        try:
            value = to_fraction(str(items[0]))
            if len(items) == 2:
                denominator = int(items[1])
                if denominator == 0:
                    raise ParseError("zero denominator in rate", _span(items[1], self._line), "bad-rate")
                value = value / denominator
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"malformed rate: {e}", span, "bad-rate")
        if value <= 0:
            raise ParseError(f"rate must be positive, got {format_rational(value)}", span, "bad-rate")
        return value, span

    def named_rate(self, items):
        tok = items[0]
        span = _span(tok, self._line)
        if str(tok) not in self._rates:
            raise ParseError(f"unbound rate parameter '{tok}'", span, "bad-rate")
        try:
            value = to_fraction(self._rates[str(tok)])
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"rate parameter '{tok}' is not a rational: {e}", span, "bad-rate")
        if value <= 0:
            raise ParseError(f"rate parameter '{tok}' must be positive", span, "bad-rate")
        return value, span

    @v_args(inline=True)
    def reaction(self, left, arrow, right, *rates):
        return "reaction", (left, str(arrow), _span(arrow, self._line), right, list(rates))


class LarkNetworkCodec(AbstractNetworkCodec):
    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger(__name__)
        self._parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=False)

    def parse(self, text: str, rates: Mapping[str, object] | None = None) -> ReactionNetwork:
        rates = rates or {}
        declared: list[str] | None = None
        order: list[str] = []
        raw_reactions: list[tuple[dict[str, int], dict[str, int], Fraction]] = []

        for line_no, raw_line in enumerate(text.replace("\r\n", "\n").replace("\r", "\n").split("\n"), start=1):
            content = raw_line.split("#", 1)[0]
            if not content.strip():
                continue
            kind, payload = self._parse_line(content, line_no, rates)

            if kind == "species":
                if declared is not None or raw_reactions:
                    raise ParseError(
                        "species header must appear once, before any reaction",
                        payload[0][1], "unknown-species-policy"
                    )
                names = [name for name, _ in payload]
                for name, span in payload:
                    if names.count(name) > 1:
                        raise ParseError(f"species '{name}' declared twice", span, "unknown-species-policy")
                declared = names
                order = list(names)
                continue

            (left, left_span), arrow, arrow_span, (right, _), rate_list = payload
            for name, _, span in left + right:
                if declared is not None and name not in declared:
                    raise ParseError(f"species '{name}' is not declared in the header", span, "unknown-species-policy")
                if name not in order:
                    order.append(name)

            expected = 2 if arrow == "<->" else 1
            if len(rate_list) != expected:
                span = rate_list[-1][1] if rate_list else arrow_span
                raise ParseError(
                    f"'{arrow}' takes {expected} rate(s), got {len(rate_list)}", span, "bad-rate"
                )

            reactant = self._collect(left)
            product = self._collect(right)
            if reactant == product:
                raise ParseError(
                    "reactant equals product",
                    SourceSpan(line=line_no, column=left_span.column, length=max(len(content.rstrip()) - left_span.column + 1, 1)),
                    "self-loop"
                )
            raw_reactions.append((reactant, product, rate_list[0][0]))
            if arrow == "<->":
                raw_reactions.append((product, reactant, rate_list[1][0]))

        species = tuple(order)
        reactions = tuple(
            Reaction(
                reactant=tuple(reactant.get(name, 0) for name in species),
                product=tuple(product.get(name, 0) for name in species),
                rate=rate
            ) for reactant, product, rate in raw_reactions
        )
        network = ReactionNetwork(species=species, reactions=reactions)
        self._logger.debug(
            "Parsed reaction network",
            extra={"species": len(species), "reactions": len(network.reactions)}
        )
        return network

    def _parse_line(self, content: str, line_no: int, rates: Mapping[str, object]):
        try:
            tree = self._parser.parse(content)
        except UnexpectedInput as e:
            column = e.column if isinstance(e.column, int) and e.column > 0 else len(content.rstrip()) or 1
            length = 1
            if isinstance(e, UnexpectedToken) and e.token is not None and len(e.token) > 0:
                length = len(e.token)
            message = "unexpected end of line" if column > len(content.rstrip()) else "unexpected input"
            if isinstance(e, UnexpectedCharacters):
                message = f"unexpected character {content[column - 1]!r}" if column <= len(content) else message
            elif isinstance(e, UnexpectedToken) and e.token is not None and e.token.type != "$END":
                message = f"unexpected token {str(e.token)!r}"
            raise ParseError(message, SourceSpan(line=line_no, column=column, length=length), "syntax") from None
        try:
            return _LineTransformer(line_no, rates).transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, ParseError):
                raise e.orig_exc from None
            raise

    @staticmethod
    def _collect(terms) -> dict[str, int]:
        counts: dict[str, int] = {}
        for name, coeff, _ in terms:
            counts[name] = counts.get(name, 0) + coeff
        return counts

    def serialize(self, network: ReactionNetwork) -> str:
        lines = []
        if network.species and self._needs_header(network):
            lines.append("species: " + ", ".join(network.species))
        for reaction in network.reactions:
            lines.append(
                f"{self._format_complex(reaction.reactant, network.species)} -> "
                f"{self._format_complex(reaction.product, network.species)} @ {format_rational(reaction.rate)}"
            )
        return "\n".join(lines) + ("\n" if lines else "")

    @staticmethod
    def _needs_header(network: ReactionNetwork) -> bool:
        # Without a header the species order is fixed by first appearance.
        seen: list[str] = []
        for reaction in network.reactions:
            for vector in (reaction.reactant, reaction.product):
                for index, coeff in enumerate(vector):
                    if coeff and network.species[index] not in seen:
                        seen.append(network.species[index])
        return seen != list(network.species)

    @staticmethod
    def _format_complex(vector, species) -> str:
        terms = []
        for coeff, name in zip(vector, species):
            if coeff == 1:
                terms.append(name)
            elif coeff > 1:
                terms.append(f"{coeff} {name}")
        return " + ".join(terms) if terms else "0"

    def parse_file(self, path: str | Path, rates: Mapping[str, object] | None = None) -> ReactionNetwork:
        return self.parse(Path(path).read_text(encoding="utf-8"), rates)
