from .exceptions import *