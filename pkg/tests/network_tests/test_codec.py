import random
from fractions import Fraction

import pytest

from src.adapters.network.dao import AbstractNetworkCodec
from src.adapters.network.dto import ReactionNetwork, Reaction
from src.exceptions import ParseError


def test_parse_two_reactions(parse):
    """Test that implicit species declaration collects one species"""
    network = parse("S -> 2 S @ 1\n3 S -> S @ 1")

    assert network.species == ("S",)
    assert len(network.reactions) == 2
    assert network.vectors == [(1,), (-2,)]


def test_parse_reversible_pair(parse):
    """Test that '<->' yields forward then backward reaction"""
    network = parse("0 <-> S @ 1, 2")

    assert network.reactions[0].reactant == (0,) and network.reactions[0].product == (1,)
    assert network.reactions[0].rate == 1
    assert network.reactions[1].reactant == (1,) and network.reactions[1].product == (0,)
    assert network.reactions[1].rate == 2


def test_parse_idhkp_fragment(parse):
    """Test the five-species enzyme fragment"""
    network = parse("E + Ip <-> EIp @ 1, 1\nEIp -> E + I @ 1")

    assert network.species == ("E", "Ip", "EIp", "I")
    assert len(network.reactions) == 3


def test_parse_comments_crlf_and_exact_rates(parse):
    """Test comments, CRLF line ends, decimal and fractional rates"""
    network = parse("# header\r\nS -> 2S @ 0.25  # trailing\r\n\r\n2S -> S @ 3/4\r\n")

    assert [r.rate for r in network.reactions] == [Fraction(1, 4), Fraction(3, 4)]


def test_parse_symbolic_rate(parse):
    """Test that symbolic rate names are bound from the rates mapping"""
    network = parse("S -> 2S @ kappa", kappa="1/2")

    assert network.reactions[0].rate == Fraction(1, 2)


def test_unbound_symbolic_rate(parse):
    """Test that an unbound rate name is a bad-rate error"""
    with pytest.raises(ParseError) as info:
        parse("S -> 2S @ kappa")

    assert info.value.kind == "bad-rate"
    assert info.value.span.line == 1
    assert info.value.span.column == 11


def test_syntax_error_span(parse):
    """Test that a syntax error points at the offending token"""
    with pytest.raises(ParseError) as info:
        parse("S -> 2S @ 1\nS => 2S @ 1")

    assert info.value.kind == "syntax"
    assert info.value.span.line == 2
    assert info.value.span.column == 3


def test_self_loop_rejected(parse):
    """Test that reactant equal to product is rejected while parsing"""
    with pytest.raises(ParseError) as info:
        parse("2S -> 2S @ 1")

    assert info.value.kind == "self-loop"


def test_wrong_rate_count(parse):
    """Test that '<->' needs exactly two rates"""
    with pytest.raises(ParseError) as info:
        parse("0 <-> S @ 1")

    assert info.value.kind == "bad-rate"


def test_species_header_fixes_order(parse):
    """Test that the species header overrides first-appearance order"""
    network = parse("species: B, A\nA -> B @ 1")

    assert network.species == ("B", "A")
    assert network.reactions[0].vector == (1, -1)


def test_undeclared_species(parse):
    """Test that species outside the header are rejected"""
    with pytest.raises(ParseError) as info:
        parse("species: A\nA -> B @ 1")

    assert info.value.kind == "unknown-species-policy"


def test_serialize_canonical(container):
    """Test canonical serialization of rates and empty complexes"""
    codec = container.get(AbstractNetworkCodec)
    network = ReactionNetwork(
        species=("S",),
        reactions=(
            Reaction(reactant=(1,), product=(2,), rate=Fraction(1, 2)),
            Reaction(reactant=(1,), product=(0,), rate=1),
        )
    )

    assert codec.serialize(network) == "S -> 2 S @ 1/2\nS -> 0 @ 1\n"


def test_round_trip_ecoli(container, corpus):
    """Test parse(serialize(n)) == n on the enzyme network"""
    codec = container.get(AbstractNetworkCodec)
    network = corpus("ecoli_idhkp_idh")

    assert codec.parse(codec.serialize(network)) == network


def test_round_trip_generated(container):
    """Test round trip on seeded random networks, including header-needing species orders"""
    codec = container.get(AbstractNetworkCodec)
    rng = random.Random(7)

    for _ in range(50):
        d = rng.randint(1, 3)
        reactions = []
        while len(reactions) < rng.randint(1, 5):
            y = tuple(rng.randint(0, 3) for _ in range(d))
            y2 = tuple(rng.randint(0, 3) for _ in range(d))
            if y != y2:
                reactions.append(Reaction(reactant=y, product=y2, rate=Fraction(rng.randint(1, 9), rng.randint(1, 4))))
        species = tuple(f"X{j}" for j in range(d))
        network = ReactionNetwork(species=species, reactions=tuple(reactions))
        used = [j for j in range(d) if any(r.reactant[j] or r.product[j] for r in network.reactions)]
        if len(used) != d:
            continue

        assert codec.parse(codec.serialize(network)) == network
