from .simulation import SimulationService, Absorbing
from .tail import (
    TailService, total_variation,
    poisson_pmf, zero_truncated_poisson_pmf, geometric_pmf, zeta_pmf
)
from .export import write_trajectory_csv, write_pmf_csv
