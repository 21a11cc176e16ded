from fractions import Fraction
import logging

from src.adapters.common import error_handler
from src.adapters.network.dto import ReactionNetwork, State
from src.adapters.network.service import NetworkService
from src.adapters.reach.dto import TriState
from .profile import ProfileService
from .geometry import GeometryService
from ..dao import AbstractDirectionalExpander
from ..dto import (
    OneDimProfile, ThresholdParams, Verdict, TailVerdict, DynamicsVerdict, EndotacticReport, CONJECTURE_NOTE
)
from src.exceptions import InconsistencyError

NOT_APPLICABLE = "n/a"


def _coefficient(coefficients: tuple[Fraction, ...], power: int) -> Fraction:
    if 0 <= power < len(coefficients):
        return coefficients[power]
    return Fraction(0)


class DynamicsService:
    def __init__(
            self,
            profile_service: ProfileService,
            geometry_service: GeometryService,
            network_service: NetworkService,
            expander: AbstractDirectionalExpander,
            logger: logging.Logger | None = None
    ):
        self._profiles = profile_service
        self._geometry = geometry_service
        self._network = network_service
        self._expander = expander
        self._logger = logger or logging.getLogger(__name__)

    @error_handler
    def directional_polynomials(
            self,
            network: ReactionNetwork,
            c: State,
            profile: OneDimProfile | None = None
    ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        profile = profile or self._profiles.profile(network)
        self._profiles.require(profile, "H2", "H4")
        omega = profile.direction.vector
        slopes = [Fraction(omega[j], omega[0]) for j in range(network.dimension)]
        # x_j = c_j + slope_j (x - c_1); slope is zero off the support
        offsets = [c[j] - slopes[j] * c[0] for j in range(network.dimension)]
        return self._expander.expand(network, offsets, slopes)

    @error_handler
    def threshold_params(
            self,
            network: ReactionNetwork,
            c: State,
            profile: OneDimProfile | None = None
    ) -> ThresholdParams:
        profile = profile or self._profiles.profile(network)
        drift, second = self.directional_polynomials(network, c, profile)
        r = profile.r
        support = set(profile.direction.support)
        degenerate = not any(
            profile.direction.seminorm(reaction.reactant) == r
            and all(c[j] >= y for j, y in enumerate(reaction.reactant) if j not in support)
            for reaction in network.reactions
        )
        alpha = _coefficient(drift, r)
        gamma = _coefficient(drift, r - 1)
        theta = _coefficient(second, r) / 2
        params = ThresholdParams(
            r=r,
            alpha=alpha,
            gamma=gamma,
            theta=theta,
            beta=gamma - theta,
            drift_coefficients=drift,
            second_moment_coefficients=second,
            degenerate=degenerate
        )
        if degenerate:
            self._logger.warning(
                "Catalyst counts disable every reaction of maximal norm", extra={"c": tuple(c), "r": r}
            )
        self._logger.info(
            "Threshold parameters computed",
            extra={"c": tuple(c), "r": r, "alpha": str(alpha), "beta": str(params.beta), "gamma": str(gamma)}
        )
        return params

    @staticmethod
    def _explosive(params: ThresholdParams) -> Verdict:
        r, alpha, beta = params.r, params.alpha, params.beta
        if r > 1 and alpha > 0:
            return Verdict(value="yes", clause="R>1, alpha>0")
        if r > 2 and alpha == 0 and beta > 0:
            return Verdict(value="yes", clause="R>2, alpha=0, beta>0")
        return Verdict(value="no", clause="neither (R>1, alpha>0) nor (R>2, alpha=0, beta>0)")

    @staticmethod
    def _recurrence_clause(params: ThresholdParams) -> str | None:
        if params.alpha < 0:
            return "alpha<0"
        if params.alpha == 0 and params.beta <= 0:
            return "alpha=0, beta<=0"
        return None

    def _recurrence(self, params: ThresholdParams) -> Verdict:
        r, alpha, beta, gamma = params.r, params.alpha, params.beta, params.gamma
        recurrent = self._recurrence_clause(params)
        if recurrent is None:
            return Verdict(value="transient", clause="neither alpha<0 nor (alpha=0, beta<=0)")
        if alpha < 0:
            return Verdict(value="positive-recurrent", clause="alpha<0")
        if beta <= 0 and r > 2:
            return Verdict(value="positive-recurrent", clause="alpha=0, beta<=0, R>2")
        if beta < 0 and r > 1:
            return Verdict(value="positive-recurrent", clause="alpha=0, beta<0, R>1")
        if gamma > 0 and r == 1:
            return Verdict(value="null-recurrent", clause="alpha=0, beta<=0, gamma>0, R=1")
        note = CONJECTURE_NOTE if (beta == 0 and r == 2) else "no positivity clause applies"
        return Verdict(value="recurrent-positivity-undetermined", clause=recurrent, note=note)

    @staticmethod
    def _exp_ergodic(params: ThresholdParams) -> Verdict:
        if params.alpha < 0:
            return Verdict(value="yes", clause="alpha<0")
        if params.alpha == 0 and params.beta <= 0 and params.r > 2:
            return Verdict(value="yes", clause="alpha=0, beta<=0, R>2")
        return Verdict(value="not-implied")

    def _quasi_ergodic(self, params: ThresholdParams) -> Verdict:
        r, alpha, beta, gamma = params.r, params.alpha, params.beta, params.gamma
        if alpha == 0 and beta <= 0 and r > 2:
            return Verdict(value="uniformly-exponentially", clause="alpha=0, beta<=0, R>2")
        if alpha < 0 and r > 1:
            return Verdict(value="uniformly-exponentially", clause="alpha<0, R>1")
        if alpha == 0 and beta <= 0 and gamma > 0 and r == 1:
            return Verdict(value="not-quasi-ergodic", clause="alpha=0, beta<=0, gamma>0, R=1")
        if self._recurrence_clause(params) is None:
            return Verdict(value="not-quasi-ergodic", clause="neither alpha<0 nor (alpha=0, beta<=0)")
        return Verdict(value="not-implied")

    @staticmethod
    def _missing(kind: str, present: TriState) -> Verdict:
        reason = f"no {kind} on the line" if present == "no" else f"{kind} existence undecided"
        return Verdict(value=NOT_APPLICABLE, clause=reason)

    def _tails(self, profile: OneDimProfile, params: ThresholdParams, has_pic: TriState, has_qic: TriState) -> TailVerdict:
        def shape() -> Verdict:
            if profile.r_plus < profile.r_minus:
                return Verdict(value="CMP-like", clause="R+<R-")
            if profile.r_plus == profile.r_minus and params.alpha < 0:
                return Verdict(value="geometric", clause="R+=R-, alpha<0")
            if params.alpha == 0:
                return Verdict(value="Zeta-like", clause="alpha=0")
            return Verdict(value=NOT_APPLICABLE, clause="no tail clause applies")

        stationary = shape() if has_pic == "yes" else self._missing("PIC", has_pic)
        if has_qic != "yes":
            qsd = self._missing("QIC", has_qic)
        elif params.r <= 1:
            qsd = Verdict(value=NOT_APPLICABLE, clause="QSD tails need R>1")
        else:
            qsd = shape()
        return TailVerdict(stationary=stationary, qsd=qsd)

    def _class_flags(self, network, c, profile, has_pic, has_qic) -> tuple[TriState, TriState]:
        if has_pic is None or has_qic is None:
            geometry = self._geometry.class_geometry(network, c, profile)
            has_pic = geometry.has_pic if has_pic is None else has_pic
            has_qic = geometry.has_qic if has_qic is None else has_qic
        return has_pic, has_qic

    @error_handler
    def tail_class(
            self,
            network: ReactionNetwork,
            c: State,
            has_pic: TriState | None = None,
            has_qic: TriState | None = None
    ) -> TailVerdict:
        profile = self._profiles.profile(network)
        self._profiles.require(profile, "H2", "H3", "H4")
        params = self.threshold_params(network, c, profile)
        has_pic, has_qic = self._class_flags(network, c, profile, has_pic, has_qic)
        return self._tails(profile, params, has_pic, has_qic)

    @error_handler
    def classify_dynamics(
            self,
            network: ReactionNetwork,
            c: State,
            has_pic: TriState | None = None,
            has_qic: TriState | None = None,
            params: ThresholdParams | None = None
    ) -> DynamicsVerdict:
        """
        Threshold decision table on L_c.
        PIC/QIC existence defaults to the class geometry of c; verdicts that need a missing class set are n/a.
        """
        profile = self._profiles.profile(network)
        self._profiles.require(profile, "H2", "H3", "H4")
        params = params or self.threshold_params(network, c, profile)
        has_pic, has_qic = self._class_flags(network, c, profile, has_pic, has_qic)

        if has_pic == "yes":
            recurrence = self._recurrence(params)
            exp_ergodic = self._exp_ergodic(params)
        else:
            recurrence = exp_ergodic = self._missing("PIC", has_pic)

        if has_qic == "yes":
            clause = self._recurrence_clause(params)
            extinction = (
                Verdict(value="yes", clause=clause) if clause
                else Verdict(value="no", clause="neither alpha<0 nor (alpha=0, beta<=0)")
            )
            quasi = self._quasi_ergodic(params)
        else:
            extinction = quasi = self._missing("QIC", has_qic)

        verdict = DynamicsVerdict(
            explosive=self._explosive(params),
            recurrence=recurrence,
            exp_ergodic=exp_ergodic,
            extinction_as=extinction,
            quasi_ergodic=quasi,
            tail=self._tails(profile, params, has_pic, has_qic)
        )
        self._logger.info(
            "Dynamics classified",
            extra={"c": tuple(c), "explosive": verdict.explosive.value, "recurrence": verdict.recurrence.value}
        )
        return verdict

    @staticmethod
    def consistency_check(
            profile: OneDimProfile,
            params: ThresholdParams,
            weakly_reversible: bool = False
    ) -> list[str]:
        """Implications every computed (profile, params) pair must satisfy; returns the violated ones."""
        violations = []
        r, alpha, gamma, beta = params.r, params.alpha, params.gamma, params.beta

        def check(condition: bool, message: str):
            if not condition:
                violations.append(message)

        check(beta == gamma - params.theta, "beta = gamma - theta")
        check(params.theta >= 0, "theta >= 0")
        check(params.drift_degree <= r, "deg(drift) <= R")
        check(r == profile.r, "R agrees with the profile")
        if not params.degenerate:
            check((params.drift_degree == r) == (alpha != 0), "deg(drift) = R iff alpha != 0")
            check(not gamma <= 0 or beta < 0, "gamma <= 0 implies beta < 0")
            check(r != 0 or alpha > 0, "R = 0 implies alpha > 0")
            check(not alpha <= 0 or r >= 1, "alpha <= 0 implies R >= 1")
        check(not profile.h3_ok or r >= 1, "H3 implies R >= 1")
        if profile.h3_ok and r == 1:
            others = set(range(1, len(profile.direction.vector)))
            check(
                profile.direction.support == (0,) and set(profile.catalysts) == others,
                "R = 1 implies every species but the first is a catalyst"
            )
        check(not (r == 1 and alpha == 0) or gamma >= 0, "R = 1 and alpha = 0 imply gamma >= 0")
        check(not profile.linear_in_first or gamma == 0, "reactants linear in the first species imply gamma = 0")
        check(profile.conservative != profile.h4_ok, "conservative iff the direction has mixed signs")
        if weakly_reversible and profile.h3_ok:
            check(profile.r_minus > profile.r_plus, "weakly reversible implies R- > R+")
        return violations

    def require_consistent(self, profile: OneDimProfile, params: ThresholdParams, weakly_reversible: bool = False):
        violations = self.consistency_check(profile, params, weakly_reversible)
        if violations:
            raise InconsistencyError("Threshold parameters violate a structural implication", violations=violations)

    @error_handler
    def endotactic_consequence(
            self,
            network: ReactionNetwork,
            c: State,
            assume_endotactic: bool = False,
            has_pic: TriState | None = None,
            has_qic: TriState | None = None
    ) -> EndotacticReport:
        """Consequences for endotactic networks: weakly reversible ones, or any network flagged by the caller."""
        if self._network.is_weakly_reversible(network):
            source = "weakly-reversible"
        elif assume_endotactic:
            source = "flag"
        else:
            return EndotacticReport(applies=False)

        profile = self._profiles.profile(network)
        self._profiles.require(profile, "H2", "H3", "H4")
        has_pic, has_qic = self._class_flags(network, c, profile, has_pic, has_qic)
        exceeds = profile.r_minus > profile.r_plus
        if not exceeds:
            self._logger.warning(
                "Endotactic consequence R- > R+ fails",
                extra={"source": source, "r_plus": profile.r_plus, "r_minus": profile.r_minus}
            )
        return EndotacticReport(
            applies=True,
            source=source,
            r_minus_exceeds_r_plus=exceeds,
            non_explosive=exceeds,
            exp_ergodic_on_pics=exceeds and has_pic == "yes",
            uniform_qsd_on_qics=exceeds and profile.r > 1 and has_qic == "yes",
            stationary_tail="CMP-like" if exceeds and has_pic == "yes" else None
        )
