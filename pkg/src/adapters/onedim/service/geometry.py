from typing import Iterable
import logging

from src.adapters.common import error_handler
from src.adapters.network.dto import ReactionNetwork, State, Complex
from src.adapters.network.service import NetworkService
from src.adapters.reach.dto import StateLabel
from .profile import ProfileService
from ..dto import OneDimProfile, LatticeLine, Interval, Progression, ClassGeometry
from src.exceptions import InconsistencyError


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _min_defined(*values: int | None) -> int | None:
    defined = [v for v in values if v is not None]
    return min(defined) if defined else None


class GeometryService:
    def __init__(
            self,
            profile_service: ProfileService,
            network_service: NetworkService,
            logger: logging.Logger | None = None
    ):
        self._profiles = profile_service
        self._network = network_service
        self._logger = logger or logging.getLogger(__name__)

    def lattice_line(self, profile: OneDimProfile, c: State) -> LatticeLine:
        self._profiles.require(profile, "H4")
        c = tuple(c)
        step = profile.direction.step
        # the line is bounded below only, c sits floor(c_j / step_j) steps above its base
        offset = min(c[j] // step[j] for j in profile.direction.support)
        return LatticeLine(
            representative=c,
            direction=profile.direction,
            base=tuple(a - offset * s for a, s in zip(c, step)),
            representative_index=offset
        )

    @staticmethod
    def first_index(line: LatticeLine, antichain: Iterable[Complex]) -> int | None:
        """Index of the first point of the line in the upward closure of antichain."""
        support = set(line.direction.support)
        step = line.step
        best = None
        for y in antichain:
            if any(line.base[j] < y[j] for j in range(len(y)) if j not in support):
                continue
            n = max([0] + [_ceil_div(y[j] - line.base[j], step[j]) for j in support])
            best = n if best is None else min(best, n)
        return best

    @error_handler
    def class_geometry(self, network: ReactionNetwork, c: State, profile: OneDimProfile | None = None) -> ClassGeometry:
        profile = profile or self._profiles.profile(network)
        line = self.lattice_line(profile, c)
        jumps = self._network.jump_structure(network)
        scale = profile.direction.scale

        i = self.first_index(line, jumps.inputs_minimal)
        o = self.first_index(line, jumps.outputs_minimal)
        i_plus = self.first_index(line, jumps.inputs_positive)
        o_minus = self.first_index(line, jumps.outputs_negative)
        c_lower = max(i_plus, o_minus) if i_plus is not None and o_minus is not None else None

        neutral = Interval(start=0, stop=_min_defined(i, o))
        if o is None or (i is not None and i <= o):
            trapping = Interval(start=0, stop=0)
        else:
            trapping = Interval(start=o, stop=i)
        escaping = Interval(start=i, stop=c_lower) if i is not None else Interval(start=0, stop=0)
        nonsingleton = Interval(start=c_lower, stop=None) if c_lower is not None else Interval(start=0, stop=0)

        if trapping.empty:
            sigma_plus = ()
        else:
            sigma_plus = tuple(sorted({line.residue(n) for n in trapping.indices(limit=trapping.start + scale)}))
        sigma_minus = tuple(k for k in range(1, scale + 1) if k not in sigma_plus)

        if o is None:
            count = 0
        elif i is None:
            count = scale
        else:
            count = min(scale, max(0, i - o))
        if count != len(sigma_plus):
            raise InconsistencyError(
                "QIC residue count disagrees with the closed formula",
                violations=[f"residues {sigma_plus} but formula gives {count}"]
            )

        progressions = []
        if c_lower is not None:
            for k in range(1, scale + 1):
                start = c_lower + (k - 1 - (c_lower - line.representative_index)) % scale
                progressions.append(Progression(
                    k=k,
                    start=start,
                    stride=scale,
                    label=StateLabel.QIC if k in sigma_plus else StateLabel.PIC,
                    first_point=line.point(start)
                ))

        geometry = ClassGeometry(
            line=line,
            i=i,
            i_plus=i_plus,
            o=o,
            o_minus=o_minus,
            c_lower=c_lower,
            c_upper=tuple("+inf" if j in profile.direction.support else v for j, v in enumerate(line.representative)),
            neutral=neutral,
            trapping=trapping,
            escaping=escaping,
            nonsingleton=nonsingleton,
            sigma_plus=sigma_plus,
            sigma_minus=sigma_minus,
            sigma_plus_count=count,
            progressions=tuple(progressions)
        )
        self._logger.info(
            "Class geometry computed",
            extra={"c": line.representative, "c_lower": c_lower, "pics": len(sigma_minus), "qics": len(sigma_plus)}
        )
        return geometry
