from .reach import ReachService
