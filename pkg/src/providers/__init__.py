from .app import AppProvider
from .settings import AnalysisSettings
