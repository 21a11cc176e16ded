from .simplex import AbstractLinearSolver, SympyLinearSolver
