from typing import Callable
import logging
import math

import numpy as np

from src.adapters.common import error_handler
from src.adapters.lattice.service import LatticeService
from src.adapters.network.dto import ReactionNetwork, State
from src.adapters.network.service import NetworkService
from src.adapters.reach.dto import Window
from ..dao import AbstractSimulator
from ..dto import SimLimits, TrajectoryOutcome, EmpiricalPMF
from src.exceptions import ParticleExtinctionError, NotBirthDeathError, SimulationParameterError

Absorbing = Callable[[State], bool]


class SimulationService:
    def __init__(
            self,
            simulator: AbstractSimulator,
            network_service: NetworkService,
            lattice_service: LatticeService,
            limits: SimLimits | None = None,
            logger: logging.Logger | None = None
    ):
        self._simulator = simulator
        self._network = network_service
        self._lattice = lattice_service
        self._limits = limits or SimLimits()
        self._logger = logger or logging.getLogger(__name__)

    @staticmethod
    def generator(seed: int, stream: int = 0) -> np.random.Generator:
        """Independent PCG64 stream number `stream` derived from seed."""
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed).spawn(stream + 1)[stream]))

    @error_handler
    def simulate(
            self,
            network: ReactionNetwork,
            x0: State,
            seed: int,
            limits: SimLimits | None = None,
            absorbing: Absorbing | None = None,
            record: bool = False,
            stream: int = 0
    ) -> TrajectoryOutcome:
        limits = limits or self._limits
        compiled = self._simulator.compile(network)
        rng = self.generator(seed, stream)
        x = np.array(x0, dtype=np.int64)
        t = 0.0
        events = 0
        halfway_norm = None
        path = [(0.0, tuple(int(v) for v in x))] if record else None

        def outcome(kind, reason, time=None):
            return TrajectoryOutcome(
                kind=kind,
                time=t if time is None else time,
                state=tuple(int(v) for v in x),
                event_count=events,
                seed=seed,
                stream=stream,
                reason=reason,
                path=tuple(path) if record else None
            )

        while True:
            if absorbing is not None and absorbing(tuple(int(v) for v in x)):
                return outcome("absorbed", "entered the absorbing set")
            if events >= limits.max_events:
                # the event budget only counts as divergence when the norm kept growing over its second half
                if halfway_norm is not None and int(x.sum()) > halfway_norm:
                    return outcome("explosion_suspected", f"{events} events before time {limits.max_time}")
                return outcome("censored", f"{events} events without a growth trend")
            if int(x.sum()) >= limits.max_state_norm:
                return outcome("explosion_suspected", f"state norm reached {limits.max_state_norm}")
            event = self._simulator.step(compiled, x, rng)
            if event is None:
                return outcome("absorbed", "no reaction enabled")
            dt, index = event
            if t + dt > limits.max_time:
                return outcome("censored", "time limit", time=limits.max_time)
            t += dt
            x += compiled.vectors[index]
            events += 1
            if events == limits.max_events // 2:
                halfway_norm = int(x.sum())
            if record:
                path.append((t, tuple(int(v) for v in x)))

    def simulate_many(
            self,
            network: ReactionNetwork,
            x0: State,
            seed: int,
            count: int,
            limits: SimLimits | None = None,
            absorbing: Absorbing | None = None
    ) -> list[TrajectoryOutcome]:
        outcomes = [
            self.simulate(network, x0, seed, limits=limits, absorbing=absorbing, stream=i)
            for i in range(count)
        ]
        self._logger.info(
            "Trajectory batch finished",
            extra={
                "count": count,
                "explosions": sum(o.kind == "explosion_suspected" for o in outcomes),
                "absorbed": sum(o.kind == "absorbed" for o in outcomes)
            }
        )
        return outcomes

    @error_handler
    def estimate_stationary(
            self,
            network: ReactionNetwork,
            x0: State,
            seed: int,
            burn_in_time: float,
            horizon_time: float,
            limits: SimLimits | None = None
    ) -> EmpiricalPMF:
        """Time-weighted occupation of the first coordinate on [burn_in, burn_in + horizon]."""
        limits = limits or self._limits
        compiled = self._simulator.compile(network)
        rng = self.generator(seed)
        x = np.array(x0, dtype=np.int64)
        start, end = burn_in_time, burn_in_time + horizon_time
        weights: dict[int, float] = {}
        t = 0.0
        events = 0
        while t < end:
            event = self._simulator.step(compiled, x, rng)
            dt = event[0] if event is not None else math.inf
            overlap = min(t + dt, end) - max(t, start)
            if overlap > 0:
                weights[int(x[0])] = weights.get(int(x[0]), 0.0) + overlap
            if event is None:
                break
            t += dt
            x += compiled.vectors[event[1]]
            events += 1
            if events >= limits.max_events:
                self._logger.warning(
                    "Event budget exhausted before the horizon", extra={"time": t, "events": events}
                )
                break
        return EmpiricalPMF.from_weights(weights, sample_count=events)

    def _total_rates(self, compiled, particles: np.ndarray) -> np.ndarray:
        return np.array([self._simulator.propensities(compiled, p).sum() for p in particles])

    @error_handler
    def estimate_qsd(
            self,
            network: ReactionNetwork,
            x0: State,
            particle_count: int,
            seed: int,
            horizon: float,
            absorbing: Absorbing | None = None,
            average_from: float | None = None,
            limits: SimLimits | None = None
    ) -> EmpiricalPMF:
        """
        Fleming-Viot estimate of the quasi-stationary law of the first coordinate.
        A particle that is absorbed restarts at the state of a uniformly chosen other particle.
        Without absorbing states this is a stationary estimate.
        :param absorbing: absorbing set; states with no enabled reaction by default
        :param average_from: time-average the particle cloud over [average_from, horizon] instead of a final snapshot
        """
        if particle_count < 1:
            raise SimulationParameterError("particle_count must be positive", "particle_count", particle_count)
        limits = limits or self._limits
        compiled = self._simulator.compile(network)
        rng = self.generator(seed)

        def absorbed(state: np.ndarray, rate: float) -> bool:
            if absorbing is not None:
                return absorbing(tuple(int(v) for v in state))
            return rate <= 0.0

        particles = np.tile(np.array(x0, dtype=np.int64), (particle_count, 1))
        rates = self._total_rates(compiled, particles)
        if absorbed(particles[0], rates[0]):
            raise SimulationParameterError(f"initial state {tuple(x0)} is absorbing", "x0", tuple(x0))

        counts: dict[int, int] = {int(x0[0]): particle_count}
        weights: dict[int, float] = {}
        t = 0.0
        events = 0
        while t < horizon and events < limits.max_events:
            total = rates.sum()
            dt = rng.exponential(1.0 / total) if total > 0 else math.inf
            if average_from is not None:
                overlap = min(t + dt, horizon) - max(t, average_from)
                if overlap > 0:
                    for value, n in counts.items():
                        weights[value] = weights.get(value, 0.0) + overlap * n
            if t + dt >= horizon:
                break
            t += dt
            i = int(np.searchsorted(np.cumsum(rates), rng.random() * total, side="right"))
            i = min(i, particle_count - 1)
            a = self._simulator.propensities(compiled, particles[i])
            index = min(int(np.searchsorted(np.cumsum(a), rng.random() * a.sum(), side="right")), compiled.size - 1)

            counts[int(particles[i][0])] -= 1
            particles[i] = particles[i] + compiled.vectors[index]
            rates[i] = self._simulator.propensities(compiled, particles[i]).sum()
            events += 1
            if absorbed(particles[i], rates[i]):
                if particle_count == 1:
                    raise ParticleExtinctionError(
                        "every particle was absorbed; increase the particle count",
                        context={"time": t, "events": events}
                    )
                j = int(rng.integers(particle_count - 1))
                j = j + 1 if j >= i else j
                particles[i] = particles[j]
                rates[i] = rates[j]
            value = int(particles[i][0])
            counts[value] = counts.get(value, 0) + 1

        self._logger.info("Fleming-Viot run finished", extra={"particles": particle_count, "events": events})
        if average_from is None or not weights:
            weights = {value: float(n) for value, n in counts.items() if n > 0}
        return EmpiricalPMF.from_weights(weights, sample_count=events)

    @error_handler
    def bdp_stationary_exact(
            self,
            network: ReactionNetwork,
            start: State,
            tail_mass: float = 1e-15,
            max_states: int = 10**6
    ) -> EmpiricalPMF:
        """
        Stationary law of a birth-death class by detailed balance, pi(n+1)/pi(n) = up(n)/down(n+1).
        The product is started from the lowest state of the class containing start.
        """
        direction = self._lattice.gcd_vector_set(network.vectors) if network.reactions else None
        if direction is None:
            raise NotBirthDeathError("birth-death structure needs a one-dimensional network")
        step = direction.step
        down_step = tuple(-s for s in step)
        bad = [r.vector for r in network.reactions if r.vector not in (step, down_step)]
        if bad:
            raise NotBirthDeathError(
                "every jump must be one lattice step", context={"step": step, "jumps": bad}
            )

        def rate(x: State, sign: tuple) -> float:
            return float(sum(
                (self._network.propensity(network, r, x) for r in network.reactions if r.vector == sign), 0
            ))

        def shift(x: State, k: int) -> State:
            return tuple(a + k * s for a, s in zip(x, step))

        x = tuple(start)
        while rate(x, down_step) > 0 and min(shift(x, -1)) >= 0 and rate(shift(x, -1), step) > 0:
            x = shift(x, -1)

        log_weights = [0.0]
        states = [x]
        log_total = 0.0
        for _ in range(max_states):
            up = rate(states[-1], step)
            if up == 0:
                break
            nxt = shift(states[-1], 1)
            down = rate(nxt, down_step)
            if down == 0:
                raise NotBirthDeathError(f"state {nxt} cannot step back, the class is not closed")
            ratio = up / down
            log_weights.append(log_weights[-1] + math.log(ratio))
            states.append(nxt)
            log_total = np.logaddexp(log_total, log_weights[-1])
            if ratio < 1 and log_weights[-1] - math.log1p(-ratio) - log_total < math.log(tail_mass):
                break
        else:
            self._logger.warning("Stationary product truncated at the state cap", extra={"states": max_states})

        weights = {state[0]: math.exp(lw - log_total) for state, lw in zip(states, log_weights)}
        return EmpiricalPMF.from_weights(weights, sample_count=len(states))

    @error_handler
    def qsd_oracle(
            self,
            network: ReactionNetwork,
            window: Window,
            absorbing: Absorbing | None = None,
            tol: float = 1e-13,
            max_iterations: int = 10**6
    ) -> EmpiricalPMF:
        """Left principal eigenvector of the window-truncated sub-generator, by uniformized power iteration."""
        def total_rate(x):
            return float(self._network.total_propensity(network, x))

        states = [
            x for x in window.states()
            if not (absorbing(x) if absorbing is not None else total_rate(x) == 0)
        ]
        index = {x: i for i, x in enumerate(states)}
        q = np.zeros((len(states), len(states)))
        for i, x in enumerate(states):
            for reaction in network.reactions:
                a = float(self._network.propensity(network, reaction, x))
                if a == 0:
                    continue
                q[i, i] -= a
                j = index.get(tuple(u + v for u, v in zip(x, reaction.vector)))
                if j is not None:
                    q[i, j] += a

        uniform = 1.05 * max(-q.diagonal().min(), 1e-12)
        p = np.eye(len(states)) + q / uniform
        v = np.full(len(states), 1.0 / len(states))
        for iteration in range(max_iterations):
            nxt = v @ p
            nxt /= nxt.sum()
            if np.abs(nxt - v).sum() < tol:
                v = nxt
                break
            v = nxt
        else:
            self._logger.warning("Power iteration did not converge", extra={"iterations": max_iterations})

        weights: dict[int, float] = {}
        for x, mass in zip(states, v):
            weights[x[0]] = weights.get(x[0], 0.0) + float(mass)
        return EmpiricalPMF.from_weights(weights, sample_count=len(states))
