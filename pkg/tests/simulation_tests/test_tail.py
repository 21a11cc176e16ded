import math

import pytest

from src.adapters.simulation.dto import EmpiricalPMF
from src.adapters.simulation.service import (
    TailService, total_variation, poisson_pmf, geometric_pmf, zeta_pmf, zero_truncated_poisson_pmf
)
from src.exceptions import InsufficientSupportError


def test_poisson_tail_is_cmp_like(container):
    """Test that a Poisson(5) tail is classified CMP-like"""
    service = container.get(TailService)

    fit = service.fit_tail(poisson_pmf(5.0, 40))

    assert fit.model == "CMP-like"
    assert fit.a > 0
    assert fit.b is not None


def test_geometric_tail(container):
    """Test that a geometric(1/2) tail is classified geometric with rate log 2"""
    service = container.get(TailService)

    fit = service.fit_tail(geometric_pmf(0.5, 40))

    assert fit.model == "geometric"
    assert fit.a == pytest.approx(math.log(2), rel=1e-6)
    assert fit.b is None


def test_zeta_tail_is_power_law(container):
    """Test that a zeta(3) tail is classified as a power law"""
    service = container.get(TailService)

    fit = service.fit_tail(zeta_pmf(3.0, 40))

    assert fit.model == "power-law"
    assert 1.5 < fit.a < 2.5


def test_tail_needs_support(container):
    """Test that a short support is rejected"""
    service = container.get(TailService)
    pmf = EmpiricalPMF.from_weights({0: 1.0, 1: 2.0, 2: 1.0, 3: 0.5})

    with pytest.raises(InsufficientSupportError):
        service.fit_tail(pmf)


def test_tail_minimum_support(container):
    """Test that ten support points are enough for a fit and nine are not"""
    service = container.get(TailService)

    assert len(geometric_pmf(0.5, 9).support) == 10
    assert service.fit_tail(geometric_pmf(0.5, 9)).model == "geometric"
    with pytest.raises(InsufficientSupportError):
        service.fit_tail(geometric_pmf(0.5, 8))


def test_reference_laws_sum_to_one():
    """Test that the censored reference laws keep their full mass"""
    for pmf in (poisson_pmf(3.0, 10), geometric_pmf(0.3, 10), zeta_pmf(2.5, 10), zero_truncated_poisson_pmf(2.0, 10)):
        assert math.fsum(pmf.probabilities.values()) == pytest.approx(1.0)
        assert max(pmf.support) == 11


def test_total_variation():
    """Test total variation on small laws"""
    p = EmpiricalPMF.from_weights({0: 1.0, 1: 1.0})
    q = EmpiricalPMF.from_weights({1: 1.0, 2: 1.0})

    assert total_variation(p, q) == pytest.approx(0.5)
    assert total_variation(p, p) == 0.0


def test_survival():
    """Test T(x) = P(X >= x)"""
    pmf = EmpiricalPMF.from_weights({1: 1.0, 2: 1.0, 4: 2.0})

    assert pmf.survival() == pytest.approx({1: 1.0, 2: 0.75, 4: 0.5})
    assert pmf.mean() == pytest.approx(2.75)
