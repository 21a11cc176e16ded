import logging

from src.adapters.common import error_handler
from src.adapters.lattice.service import LatticeService
from src.adapters.network.dto import ReactionNetwork, State
from src.adapters.network.service import NetworkService
from ..dto import OneDimProfile
from src.exceptions import NotOneDimensionalError, HypothesisViolationError

HYPOTHESES = {
    "H2": "the first species must change along the direction and must not be a catalyst",
    "H3": "reactions must move both along and against the direction",
    "H4": "the direction must be non-negative in every coordinate",
}


class ProfileService:
    def __init__(
            self,
            network_service: NetworkService,
            lattice_service: LatticeService,
            logger: logging.Logger | None = None
    ):
        self._network = network_service
        self._lattice = lattice_service
        self._logger = logger or logging.getLogger(__name__)

    @error_handler
    def profile(self, network: ReactionNetwork) -> OneDimProfile:
        self._network.require_valid(network)
        direction = self._lattice.gcd_vector_set(network.vectors) if network.reactions else None
        if direction is None:
            raise NotOneDimensionalError(
                "stoichiometric subspace is not one-dimensional",
                dimension=self._lattice.span_dimension(network.vectors)
            )

        catalysts = tuple(
            j for j in range(network.dimension)
            if any(r.reactant[j] == r.product[j] > 0 for r in network.reactions)
        )
        norms = {1: [], -1: []}
        for reaction in network.reactions:
            norms[direction.sign(reaction.vector)].append(direction.seminorm(reaction.reactant))
        r_plus = max(norms[1]) if norms[1] else None
        r_minus = max(norms[-1]) if norms[-1] else None

        h2_ok = direction.vector[0] != 0 and 0 not in catalysts
        suggested = None
        if not h2_ok:
            lead = direction.support[0]
            suggested = (network.species[lead],) + tuple(s for j, s in enumerate(network.species) if j != lead)

        profile = OneDimProfile(
            direction=direction,
            catalysts=catalysts,
            r=max(v for v in (r_plus, r_minus) if v is not None),
            r_plus=r_plus,
            r_minus=r_minus,
            h2_ok=h2_ok,
            h3_ok=r_plus is not None and r_minus is not None,
            h4_ok=all(v >= 0 for v in direction.vector),
            conservative=self._lattice.is_conservative(network),
            linear_in_first=all(
                r.reactant[0] == 1 and direction.seminorm(r.reactant) == 1 for r in network.reactions
            ),
            suggested_order=suggested
        )
        failed = [h for h, ok in (("H2", profile.h2_ok), ("H3", profile.h3_ok), ("H4", profile.h4_ok)) if not ok]
        if failed:
            self._logger.warning("Hypotheses violated", extra={"hypotheses": failed})
        return profile

    def require(self, profile: OneDimProfile, *hypotheses: str):
        flags = {"H2": profile.h2_ok, "H3": profile.h3_ok, "H4": profile.h4_ok}
        for hypothesis in hypotheses:
            if flags[hypothesis]:
                continue
            raise HypothesisViolationError(
                f"{hypothesis} violated: {HYPOTHESES[hypothesis]}",
                hypothesis=hypothesis,
                suggested_order=list(profile.suggested_order) if hypothesis == "H2" and profile.suggested_order else None
            )

    @staticmethod
    def shift_representative(profile: OneDimProfile, c: State, k: int) -> State:
        """c moved k primitive steps along the line."""
        shifted = tuple(a + k * s for a, s in zip(c, profile.direction.step))
        if min(shifted) < 0:
            raise ValueError(f"shifting {c} by {k} steps leaves the non-negative orthant")
        return shifted
