import json
import logging
from pathlib import Path
from typing import Any, Mapping

from dishka import Container

from src.adapters.network.dao import AbstractNetworkCodec, SourceSpan
from src.adapters.network.dto import ReactionNetwork, State
from src.adapters.network.service import NetworkService
from src.adapters.lattice.service import LatticeService
from src.adapters.reach.dto import Window, StateLabel
from src.adapters.reach.service import ReachService
from src.adapters.structure.service import ClassificationService, CoreService
from src.adapters.onedim.service import ProfileService, GeometryService, DynamicsService
from src.adapters.simulation.dto import SimLimits, EmpiricalPMF
from src.adapters.simulation.service import (
    SimulationService, TailService, write_trajectory_csv, write_pmf_csv
)
from src.providers import AnalysisSettings
from src.exceptions import ParseError, WindowError, InsufficientSupportError
from .state import RunState, Report

SCHEMA_PATH = Path(__file__).resolve().parents[3] / "schema" / "report.schema.json"


def _pmf_payload(pmf: EmpiricalPMF) -> dict[str, Any]:
    return {
        "probabilities": {str(x): p for x, p in pmf.probabilities.items()},
        "sample_count": pmf.sample_count,
        "mean": pmf.mean()
    }


class CommandManager:
    def __init__(self, container: Container, settings: AnalysisSettings, state: RunState):
        self._container = container
        self._settings = settings
        self._state = state
        self._logger = logging.getLogger(__name__)

    def _load(self, path: str, rates: Mapping[str, str] | None = None) -> ReactionNetwork:
        codec = self._container.get(AbstractNetworkCodec)
        network = codec.parse_file(path, rates)
        if not network.reactions:
            raise ParseError("no reactions", SourceSpan(line=1, column=1), "syntax")
        return network

    def _representative(self, network: ReactionNetwork, c: State | None) -> State:
        if c is None:
            return (0,) * network.dimension
        if len(c) != network.dimension or min(c) < 0:
            raise WindowError(
                f"state must have {network.dimension} non-negative coordinates", state=c
            )
        return tuple(c)

    # --- commands --- #

    def parse(self, path: str, rates: Mapping[str, str] | None = None) -> Report:
        network = self._load(path, rates)
        validation = self._container.get(NetworkService).validate(network)
        for violation in validation.violations:
            self._state.warn(violation)
        canonical = self._container.get(AbstractNetworkCodec).serialize(network)
        return self._state.report(network, {"canonical": canonical, "valid": validation.ok})

    def classify(self, path: str, rates=None, budget: int | None = None, sample_window: int | None = None) -> Report:
        network = self._load(path, rates)
        report = self._container.get(ClassificationService).classify(network, budget=budget, sample_bound=sample_window)
        for warning in report.warnings:
            self._state.warn(warning, unknown=True)
        for status in report.omega_o:
            if status.value == "unknown":
                self._state.warn(f"return for jump {status.omega} undecided", unknown=True)
        payload = report.model_dump(mode="json")
        payload["omega_o_set"] = report.omega_o_set
        return self._state.report(network, payload)

    def core(self, path: str, rates=None, budget: int | None = None, cap: int | None = None) -> Report:
        network = self._load(path, rates)
        report = self._container.get(CoreService).minimal_core_networks(network, budget=budget, cap=cap)
        if report.incomplete:
            self._state.warn("core enumeration stopped on the budget", unknown=True)
        for core in report.cores:
            if core.is_core == "unknown":
                self._state.warn(f"core status of {list(core.sub)} undecided", unknown=True)
        payload = report.model_dump(mode="json")
        payload["union"] = sorted({i for core in report.cores for i in core.sub})
        return self._state.report(network, payload)

    def analyze1d(self, path: str, rates=None, c: State | None = None, endotactic: bool = False) -> Report:
        network = self._load(path, rates)
        c = self._representative(network, c)
        profiles = self._container.get(ProfileService)
        geometry_service = self._container.get(GeometryService)
        dynamics = self._container.get(DynamicsService)

        profile = profiles.profile(network)
        profiles.require(profile, "H2", "H4")
        geometry = geometry_service.class_geometry(network, c, profile)
        params = dynamics.threshold_params(network, c, profile)
        weakly_reversible = self._container.get(NetworkService).is_weakly_reversible(network)
        dynamics.require_consistent(profile, params, weakly_reversible)

        payload: dict[str, Any] = {
            "c": list(c),
            "profile": profile.model_dump(mode="json"),
            "params": params.model_dump(mode="json"),
            "geometry": geometry.model_dump(mode="json"),
            "consistency": [],
            "weakly_reversible": weakly_reversible,
        }
        if params.degenerate:
            self._state.warn("no reaction of maximal norm is enabled on this line")
        if not profile.h3_ok:
            self._state.warn("H3 fails: no reaction decreases along the direction, dynamic verdicts skipped")
            payload["dynamics"] = None
            payload["endotactic"] = None
            return self._state.report(network, payload)

        verdict = dynamics.classify_dynamics(
            network, c, has_pic=geometry.has_pic, has_qic=geometry.has_qic, params=params
        )
        if verdict.recurrence.value == "recurrent-positivity-undetermined":
            self._state.warn(verdict.recurrence.note or "recurrence positivity undetermined", unknown=True)
        endotactic_report = dynamics.endotactic_consequence(
            network, c, assume_endotactic=endotactic, has_pic=geometry.has_pic, has_qic=geometry.has_qic
        )
        payload["dynamics"] = verdict.model_dump(mode="json")
        payload["endotactic"] = endotactic_report.model_dump(mode="json")
        return self._state.report(network, payload)

    def simulate(
            self,
            path: str,
            mode: str,
            x0: State,
            seed: int,
            rates=None,
            events: int | None = None,
            time: float | None = None,
            norm: int | None = None,
            count: int = 1,
            burn_in: float = 0.0,
            horizon: float = 1000.0,
            particles: int = 100,
            exact: bool = False,
            csv_path: str | None = None
    ) -> Report:
        network = self._load(path, rates)
        x0 = self._representative(network, x0)
        simulation = self._container.get(SimulationService)
        base = self._settings.limits
        limits = SimLimits(
            max_events=events or base.max_events,
            max_time=time or base.max_time,
            max_state_norm=norm or base.max_state_norm
        )
        payload: dict[str, Any] = {"mode": mode, "x0": list(x0), "seed": seed}

        if mode == "traj":
            if count > 1:
                outcomes = simulation.simulate_many(network, x0, seed, count, limits=limits)
                payload["outcomes"] = [o.model_dump(mode="json", exclude={"path"}) for o in outcomes]
                payload["kinds"] = {
                    kind: sum(o.kind == kind for o in outcomes)
                    for kind in ("absorbed", "censored", "explosion_suspected")
                }
            else:
                outcome = simulation.simulate(network, x0, seed, limits=limits, record=csv_path is not None)
                payload["outcome"] = outcome.model_dump(mode="json", exclude={"path"})
                if csv_path:
                    with open(csv_path, "w", newline="", encoding="utf-8") as stream:
                        write_trajectory_csv(stream, network.species, outcome)
            return self._state.report(network, payload)

        if mode == "qsd":
            pmf = simulation.estimate_qsd(
                network, x0, particles, seed, horizon,
                average_from=burn_in or None, limits=limits
            )
        elif mode == "tail" and exact:
            pmf = simulation.bdp_stationary_exact(network, x0)
        else:
            pmf = simulation.estimate_stationary(network, x0, seed, burn_in, horizon, limits=limits)
        payload["pmf"] = _pmf_payload(pmf)

        if mode == "tail":
            try:
                payload["tail"] = self._container.get(TailService).fit_tail(pmf).model_dump(mode="json")
            except InsufficientSupportError as e:
                self._state.warn(e.message, unknown=True)
                payload["tail"] = None
        if csv_path:
            with open(csv_path, "w", newline="", encoding="utf-8") as stream:
                write_pmf_csv(stream, pmf)
        return self._state.report(network, payload)

    def oracle(self, path: str, rates=None, window: int = 12, c: State | None = None) -> Report:
        network = self._load(path, rates)
        reach = self._container.get(ReachService)
        box = Window.cube(network.dimension, window)
        members = None
        if c is not None:
            c = self._representative(network, c)
            line = set(reach.compatibility_class(network, c, box))
            members = line.__contains__
        decomposition = reach.decompose_window(network, box, members)

        payload: dict[str, Any] = {
            "window": list(box.bounds),
            "classes": [cls.model_dump(mode="json") for cls in decomposition.classes],
            "labels": {
                label.value: [list(x) for x in decomposition.states_with_label(label)]
                for label in StateLabel
            },
            "non_singleton_states": [list(x) for x in decomposition.non_singleton_states()],
        }
        if c is not None:
            payload["c"] = list(c)
            if self._container.get(LatticeService).span_dimension(network.vectors) == 1:
                payload["k_set"] = [list(x) for x in reach.k_set(network, c, box)]
                payload["geometry_mismatches"] = self._geometry_mismatches(network, c, decomposition)
        return self._state.report(network, payload)

    def _geometry_mismatches(self, network, c, decomposition) -> list[dict[str, Any]] | None:
        """States whose brute-force label differs from the closed-form geometry; None when it does not apply."""
        profiles = self._container.get(ProfileService)
        profile = profiles.profile(network)
        if not profile.h4_ok:
            self._state.warn("H4 fails: the closed-form geometry does not apply, brute force only")
            return None
        geometry = self._container.get(GeometryService).class_geometry(network, c, profile)
        mismatches = []
        for cls in decomposition.classes:
            if cls.label == StateLabel.UNCERTAIN:
                continue
            for x in cls.states:
                expected = geometry.label_of(x)
                if expected is not None and expected != cls.label:
                    mismatches.append({"state": list(x), "oracle": cls.label.value, "geometry": expected.value})
        if mismatches:
            self._state.warn(f"{len(mismatches)} states disagree with the closed-form geometry")
        return mismatches

    @staticmethod
    def schema() -> dict[str, Any]:
        return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
