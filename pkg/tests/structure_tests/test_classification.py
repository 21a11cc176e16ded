from itertools import product

import pytest

from src.adapters.structure.dao import AbstractSetExpressionCodec
from src.adapters.structure.service import ClassificationService
from src.exceptions import ParseError


def test_ecoli_returning_jumps(container, corpus):
    """Test that only the dephosphorylation jump EIp -> E + I has no way back"""
    service = container.get(ClassificationService)
    network = corpus("ecoli_idhkp_idh")

    statuses = {status.omega: status for status in service.omega_o(network)}

    assert statuses[(1, 0, -1, 1, 0)].value == "no"
    assert {omega for omega, status in statuses.items() if status.value == "yes"} == {
        (-1, -1, 1, 0, 0), (1, 1, -1, 0, 0), (0, 0, -1, -1, 1), (0, 0, 1, 1, -1), (0, 1, 1, 0, -1)
    }


@pytest.mark.slow
def test_ecoli_state_space(container, corpus):
    """Test the IDHKP-IDH classification against its closed forms on every state of [0,6]^5"""
    service = container.get(ClassificationService)
    codec = container.get(AbstractSetExpressionCodec)
    network = corpus("ecoli_idhkp_idh")

    report = service.classify(network, sample_bound=6)

    assert report.sample_bounds == (6, 6, 6, 6, 6)
    assert report.extinct_sufficient == "yes"
    assert report.essential == "no"
    assert not report.positively_independent
    assert not report.trap_set_empty
    assert not report.trap_set_finite
    assert len(report.omega_o_set) == 5
    for x in product(range(7), repeat=5):
        e, ip, eip, i, eipi = x
        neutral = e * ip == 0 and eip == 0 and eipi == 0 and e * i == 0
        trapping = ip == 0 and eip == 0 and eipi == 0 and e * i > 0
        membership = service.membership(network, report, x)

        assert report.in_neutral(x) == membership.neutral == neutral
        assert report.in_trapping(x) == membership.trapping == trapping
        # no escaping states, so every input state lies in a PIC or QIC
        assert membership.escaping == "no"
        assert membership.nonsingleton == ("no" if neutral or trapping else "yes")
    for x in product(range(2), repeat=5):
        assert codec.evaluate(report.n_expression, x) == report.in_neutral(x)
        assert codec.evaluate(report.t_expression, x) == report.in_trapping(x)


def test_coexistence_trapping_set(container, corpus):
    """Test that the trapping states are {0} x {2, 3, ...}"""
    service = container.get(ClassificationService)

    report = service.classify(corpus("coexistence"), sample_bound=4)

    assert not report.trap_set_empty
    assert not report.trap_set_finite
    for x in product(range(8), repeat=2):
        assert report.in_trapping(x) == (x[0] == 0 and x[1] >= 2)


def test_weakly_reversible_is_essential(container, corpus):
    """Test that the 3-cycle returns from every jump"""
    service = container.get(ClassificationService)

    report = service.classify(corpus("three_cycle", k1=1, k2=1, k3=1))

    assert report.essential == "yes"
    assert report.extinct_sufficient == "no"
    assert report.trap_set_empty


def test_pure_birth_escapes(container, corpus):
    """Test that every state of 0 -> S is escaping"""
    service = container.get(ClassificationService)
    network = corpus("pure_birth")

    report = service.classify(network)

    assert report.inputs_minimal == ((0,),)
    assert report.essential == "no"
    assert report.positively_independent
    assert report.extinct_sufficient == "yes"
    for n in range(5):
        membership = service.membership(network, report, (n,))
        assert membership.escaping == "yes"
        assert membership.nonsingleton == "no"
        assert not membership.neutral


def test_membership_two_cores(container, corpus):
    """Test that 0 is neutral and positive counts lie in a closed class"""
    service = container.get(ClassificationService)
    network = corpus("two_cores")
    report = service.classify(network)

    zero = service.membership(network, report, (0,))
    assert zero.neutral and zero.escaping == "no"

    three = service.membership(network, report, (3,))
    assert three.nonsingleton == "yes"
    assert three.escaping == "no"


def test_expression_rendering(container):
    """Test set expression rendering and evaluation"""
    codec = container.get(AbstractSetExpressionCodec)

    expression = codec.render_difference([(0, 2)], [(1, 0)])

    assert expression == "up{(0,2)} & !up{(1,0)}"
    assert codec.evaluate(expression, (0, 3))
    assert not codec.evaluate(expression, (1, 3))
    assert codec.render_union([], []) == "false"
    assert codec.render_complement("false") == "true"


def test_expression_syntax_error(container):
    """Test that a malformed expression raises a ParseError"""
    codec = container.get(AbstractSetExpressionCodec)

    with pytest.raises(ParseError):
        codec.evaluate("up{(1,2)", (1, 2))
