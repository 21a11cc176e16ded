from .classification import ClassificationService
from .core import CoreService
