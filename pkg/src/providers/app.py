import logging

from dishka import Provider, provide, Scope

from src.adapters.network.dao import AbstractNetworkCodec, LarkNetworkCodec
from src.adapters.network.service import NetworkService
from src.adapters.lattice.dao import AbstractLinearSolver, SympyLinearSolver
from src.adapters.lattice.service import LatticeService
from src.adapters.reach.dao import AbstractComponentFinder, ScipyComponentFinder
from src.adapters.reach.service import ReachService
from src.adapters.structure.dao import AbstractSetExpressionCodec, LarkSetExpressionCodec
from src.adapters.structure.service import ClassificationService, CoreService
from src.adapters.onedim.dao import AbstractDirectionalExpander, SympyDirectionalExpander
from src.adapters.onedim.service import ProfileService, GeometryService, DynamicsService
from src.adapters.simulation.dao import AbstractSimulator, GillespieDirectSimulator
from src.adapters.simulation.service import SimulationService, TailService
from .settings import AnalysisSettings


class AppProvider(Provider):
    def __init__(
            self,
            scope: Scope,
            logger: logging.Logger,
            settings: AnalysisSettings | None = None
    ):
        super().__init__(scope=scope)
        self.logger = logger
        self.settings = settings or AnalysisSettings()

    # --- engines --- #

    @provide(scope=Scope.APP)
    def network_codec(self) -> AbstractNetworkCodec:
        return LarkNetworkCodec(logger=self.logger)

    @provide(scope=Scope.APP)
    def linear_solver(self) -> AbstractLinearSolver:
        return SympyLinearSolver(logger=self.logger)

    @provide(scope=Scope.APP)
    def component_finder(self) -> AbstractComponentFinder:
        return ScipyComponentFinder(logger=self.logger)

    @provide(scope=Scope.APP)
    def expression_codec(self) -> AbstractSetExpressionCodec:
        return LarkSetExpressionCodec(logger=self.logger)

    @provide(scope=Scope.APP)
    def directional_expander(self) -> AbstractDirectionalExpander:
        return SympyDirectionalExpander(logger=self.logger)

    @provide(scope=Scope.APP)
    def simulator(self) -> AbstractSimulator:
        return GillespieDirectSimulator(logger=self.logger)

    # --- structural analysis --- #

    @provide(scope=Scope.APP)
    def lattice_service(self, solver: AbstractLinearSolver) -> LatticeService:
        return LatticeService(solver=solver, logger=self.logger)

    @provide(scope=Scope.APP)
    def network_service(
            self,
            lattice_service: LatticeService,
            component_finder: AbstractComponentFinder
    ) -> NetworkService:
        return NetworkService(
            lattice_service=lattice_service,
            component_finder=component_finder,
            logger=self.logger
        )

    @provide(scope=Scope.APP)
    def reach_service(
            self,
            network_service: NetworkService,
            lattice_service: LatticeService,
            component_finder: AbstractComponentFinder
    ) -> ReachService:
        return ReachService(
            network_service=network_service,
            lattice_service=lattice_service,
            component_finder=component_finder,
            budget=self.settings.budget,
            window_bound=self.settings.window_bound,
            logger=self.logger
        )

    @provide(scope=Scope.APP)
    def classification_service(
            self,
            network_service: NetworkService,
            lattice_service: LatticeService,
            reach_service: ReachService,
            expression_codec: AbstractSetExpressionCodec
    ) -> ClassificationService:
        return ClassificationService(
            network_service=network_service,
            lattice_service=lattice_service,
            reach_service=reach_service,
            expression_codec=expression_codec,
            budget=self.settings.budget,
            padding=self.settings.core_padding,
            sample_bound=self.settings.sample_bound,
            logger=self.logger
        )

    @provide(scope=Scope.APP)
    def core_service(self, reach_service: ReachService) -> CoreService:
        return CoreService(
            reach_service=reach_service,
            budget=self.settings.budget,
            padding=self.settings.core_padding,
            core_cap=self.settings.core_cap,
            logger=self.logger
        )

    # --- one-dimensional dynamics --- #

    @provide(scope=Scope.APP)
    def profile_service(self, network_service: NetworkService, lattice_service: LatticeService) -> ProfileService:
        return ProfileService(network_service=network_service, lattice_service=lattice_service, logger=self.logger)

    @provide(scope=Scope.APP)
    def geometry_service(self, profile_service: ProfileService, network_service: NetworkService) -> GeometryService:
        return GeometryService(profile_service=profile_service, network_service=network_service, logger=self.logger)

    @provide(scope=Scope.APP)
    def dynamics_service(
            self,
            profile_service: ProfileService,
            geometry_service: GeometryService,
            network_service: NetworkService,
            expander: AbstractDirectionalExpander
    ) -> DynamicsService:
        return DynamicsService(
            profile_service=profile_service,
            geometry_service=geometry_service,
            network_service=network_service,
            expander=expander,
            logger=self.logger
        )

    # --- simulation --- #

    @provide(scope=Scope.APP)
    def simulation_service(
            self,
            simulator: AbstractSimulator,
            network_service: NetworkService,
            lattice_service: LatticeService
    ) -> SimulationService:
        return SimulationService(
            simulator=simulator,
            network_service=network_service,
            lattice_service=lattice_service,
            limits=self.settings.limits,
            logger=self.logger
        )

    @provide(scope=Scope.APP)
    def tail_service(self) -> TailService:
        return TailService(logger=self.logger)
