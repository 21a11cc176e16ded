from .lattice import LatticeService
