from .interface import run, build_parser
from .manager import CommandManager
from .state import Report, RunState, NetworkDigest
