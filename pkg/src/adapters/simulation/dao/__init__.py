from .ssa import AbstractSimulator, GillespieDirectSimulator, CompiledNetwork
