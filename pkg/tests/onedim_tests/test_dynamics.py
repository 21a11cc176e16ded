from fractions import Fraction

import pytest

from src.adapters.network.service import NetworkService
from src.adapters.onedim.service import ProfileService, DynamicsService
from src.exceptions import InconsistencyError, HypothesisViolationError


def _params(container, network, c=(0,)):
    return container.get(DynamicsService).threshold_params(network, c)


def test_explosive_symmetric_walk(container, corpus):
    """Test that R=4, alpha=0, beta=1 is explosive"""
    service = container.get(DynamicsService)
    network = corpus("explosive_a")

    params = service.threshold_params(network, (0,))
    verdict = service.classify_dynamics(network, (1,))

    assert (params.r, params.alpha, params.gamma, params.theta, params.beta) == (4, 0, 2, 1, 1)
    assert verdict.explosive.value == "yes"
    assert verdict.explosive.clause == "R>2, alpha=0, beta>0"
    assert verdict.recurrence.value == "transient"


def test_positive_recurrent_symmetric_walk(container, corpus):
    """Test that R=3, alpha=0, beta=0 is positive recurrent and not explosive"""
    service = container.get(DynamicsService)
    network = corpus("explosive_b")

    params = service.threshold_params(network, (0,))
    verdict = service.classify_dynamics(network, (1,))

    assert (params.r, params.alpha, params.beta) == (3, 0, 0)
    assert verdict.explosive.value == "no"
    assert verdict.recurrence.value == "positive-recurrent"
    assert verdict.recurrence.clause == "alpha=0, beta<=0, R>2"
    assert verdict.exp_ergodic.value == "yes"


@pytest.mark.parametrize("kappa", ["1/4", "1/2", "3/4", "1", "2", "10"])
def test_kappa_threshold(container, corpus, kappa):
    """Test that beta = 1 - kappa makes the network explosive below kappa = 1 and positive recurrent from it"""
    service = container.get(DynamicsService)
    network = corpus("kappa_threshold", kappa=kappa)

    params = service.threshold_params(network, (0,))
    verdict = service.classify_dynamics(network, (0,))

    assert params.beta == 1 - Fraction(kappa)
    assert params.theta == Fraction(kappa)
    if Fraction(kappa) < 1:
        assert verdict.explosive.value == "yes"
        assert verdict.recurrence.value == "transient"
    else:
        assert verdict.explosive.value == "no"
        assert verdict.recurrence.value == "positive-recurrent"
        assert verdict.exp_ergodic.value == "yes"


def test_kappa_threshold_original_explodes(container, corpus):
    """Test that x^2 - 3x + 1 with R=2 gives alpha=1 and explosion"""
    service = container.get(DynamicsService)
    network = corpus("kappa_threshold_original")

    params = service.threshold_params(network, (0,))
    verdict = service.classify_dynamics(network, (0,))

    assert (params.r, params.alpha) == (2, 1)
    assert verdict.explosive.clause == "R>1, alpha>0"


def test_geometric_tail(container, corpus):
    """Test that R+=R-=1 with alpha=-1 gives a geometric stationary tail"""
    service = container.get(DynamicsService)
    network = corpus("birth_death_geometric")

    params = service.threshold_params(network, (0,))
    verdict = service.classify_dynamics(network, (0,))

    assert (params.r, params.alpha) == (1, -1)
    assert verdict.recurrence.value == "positive-recurrent"
    assert verdict.exp_ergodic.value == "yes"
    assert verdict.tail.stationary.value == "geometric"
    assert verdict.tail.qsd.value == "n/a"


@pytest.mark.parametrize("kappa", ["1/2", "1", "3"])
def test_zeta_tail(container, corpus, kappa):
    """Test that drift 1 - x at R=2 has alpha=0, beta=-1-kappa and a Zeta-like tail for every kappa"""
    service = container.get(DynamicsService)
    network = corpus("birth_death_zeta", kappa=kappa)

    params = service.threshold_params(network, (0,))
    verdict = service.classify_dynamics(network, (0,))

    assert (params.r, params.alpha, params.gamma) == (2, 0, -1)
    assert params.beta == -1 - Fraction(kappa)
    # the threshold table never makes this network explosive, whatever kappa is
    assert verdict.explosive.value == "no"
    assert verdict.recurrence.clause == "alpha=0, beta<0, R>1"
    assert verdict.tail.stationary.value == "Zeta-like"


def test_three_cycle_cmp_tail(container, corpus):
    """Test that R+ < R- gives a CMP-like tail"""
    service = container.get(DynamicsService)

    verdict = service.classify_dynamics(corpus("three_cycle", k1=1, k2=1, k3=1), (1,))

    assert verdict.recurrence.value == "positive-recurrent"
    assert verdict.tail.stationary.value == "CMP-like"
    assert verdict.extinction_as.value == "n/a"


@pytest.mark.parametrize("k1, k2", [("1", "1"), ("2", "1/2"), ("1/3", "3")])
def test_two_species_threshold(container, corpus, k1, k2):
    """Test that the two-species network explodes on L_c iff c2 - c1 > 3 and is positive recurrent otherwise"""
    service = container.get(DynamicsService)
    network = corpus("two_species_threshold", k1=k1, k2=k2)
    k2 = Fraction(k2)

    for c2 in range(0, 9):
        params = service.threshold_params(network, (0, c2))
        verdict = service.classify_dynamics(network, (0, c2), params=params)

        assert params.alpha == 0
        assert params.gamma == 4 * k2 * (c2 - 2)
        assert params.theta == 4 * k2
        assert params.beta == 4 * k2 * (c2 - 3)
        if c2 > 3:
            assert verdict.explosive.value == "yes"
            assert verdict.recurrence.value == "transient"
        else:
            assert verdict.explosive.value == "no"
            assert verdict.recurrence.value == "positive-recurrent"


def test_quasi_stationary_verdicts(container, corpus):
    """Test the verdicts on a class set made only of QICs"""
    service = container.get(DynamicsService)

    verdict = service.classify_dynamics(corpus("subcritical_linear"), (1,))

    assert verdict.recurrence.value == "n/a"
    assert verdict.extinction_as.value == "yes"
    assert verdict.quasi_ergodic.value == "uniformly-exponentially"
    assert verdict.tail.qsd.value == "CMP-like"


def test_dynamics_require_h3(container, corpus):
    """Test that dynamic verdicts need reactions in both directions"""
    service = container.get(DynamicsService)

    with pytest.raises(HypothesisViolationError):
        service.classify_dynamics(corpus("pure_birth"), (0,))


def test_degenerate_catalyst(container, parse):
    """Test that a missing catalyst disabling every reaction of norm R is flagged"""
    service = container.get(DynamicsService)
    network = parse("species: S, E\n0 <-> S @ 1, 1\nS + E -> 2S + E @ 1\n2S + E -> S + E @ 1")

    assert service.threshold_params(network, (3, 0)).degenerate
    assert not service.threshold_params(network, (3, 1)).degenerate


def test_consistency_holds(container, corpus):
    """Test that computed parameters satisfy every structural implication"""
    profiles = container.get(ProfileService)
    networks = container.get(NetworkService)
    for name, rates in [
        ("explosive_a", {}), ("explosive_b", {}), ("birth_death_geometric", {}),
        ("three_cycle", {"k1": 1, "k2": 1, "k3": 1}), ("kappa_threshold", {"kappa": 2}),
    ]:
        network = corpus(name, **rates)
        profile = profiles.profile(network)
        params = _params(container, network)

        assert DynamicsService.consistency_check(profile, params, networks.is_weakly_reversible(network)) == []


def test_consistency_detects_corruption(container, corpus):
    """Test that a tampered beta is reported"""
    service = container.get(DynamicsService)
    network = corpus("three_cycle", k1=1, k2=1, k3=1)
    profile = container.get(ProfileService).profile(network)
    params = service.threshold_params(network, (1,))
    corrupted = params.model_copy(update={"beta": params.beta + 1})

    assert "beta = gamma - theta" in DynamicsService.consistency_check(profile, corrupted)
    with pytest.raises(InconsistencyError):
        service.require_consistent(profile, corrupted)


def test_rate_scaling(container, corpus):
    """Test that scaling every rate scales the parameters and keeps the verdicts"""
    service = container.get(DynamicsService)
    network = corpus("explosive_a")

    params = service.threshold_params(network, (0,))
    scaled = service.threshold_params(network.with_rates_scaled(3), (0,))

    assert scaled == params.scaled(Fraction(3))
    assert service.classify_dynamics(network.with_rates_scaled(3), (1,)) == service.classify_dynamics(network, (1,))


def test_representative_shift(container, corpus):
    """Test that every representative of L_c gives the same parameters"""
    service = container.get(DynamicsService)
    profiles = container.get(ProfileService)
    network = corpus("two_species_threshold", k1=2, k2=1)
    profile = profiles.profile(network)

    base = service.threshold_params(network, (0, 5))
    for k in range(1, 4):
        shifted = ProfileService.shift_representative(profile, (0, 5), k)
        assert service.threshold_params(network, shifted) == base


def test_random_network_consistency(container, one_dimensional_networks):
    """Test the structural implications on 200 random networks with up to three species and eight reactions"""
    service = container.get(DynamicsService)
    networks = container.get(NetworkService)
    species_counts = set()

    for network, profile, c in one_dimensional_networks(2024, 200):
        params = service.threshold_params(network, c, profile)

        assert not params.degenerate
        assert DynamicsService.consistency_check(profile, params, networks.is_weakly_reversible(network)) == []
        species_counts.add(network.dimension)

    assert species_counts == {1, 2, 3}


def test_endotactic_weakly_reversible(container, corpus):
    """Test the endotactic consequences for the weakly reversible 3-cycle"""
    service = container.get(DynamicsService)

    report = service.endotactic_consequence(corpus("three_cycle", k1=1, k2=1, k3=1), (1,))

    assert report.applies and report.source == "weakly-reversible"
    assert report.r_minus_exceeds_r_plus and report.non_explosive
    assert report.exp_ergodic_on_pics
    assert report.stationary_tail == "CMP-like"
    assert not report.uniform_qsd_on_qics


def test_endotactic_flag(container, corpus):
    """Test that the flag is needed and then checked for a non-reversible network"""
    service = container.get(DynamicsService)
    network = corpus("birth_death_geometric")

    assert not service.endotactic_consequence(network, (0,)).applies
    report = service.endotactic_consequence(network, (0,), assume_endotactic=True)
    assert report.source == "flag"
    assert not report.r_minus_exceeds_r_plus
