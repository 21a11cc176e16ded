from .profile import ProfileService
from .geometry import GeometryService
from .dynamics import DynamicsService
