from .model import NetworkService, falling_factorial
