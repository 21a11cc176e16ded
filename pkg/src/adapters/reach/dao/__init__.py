from .graph import AbstractComponentFinder, ScipyComponentFinder
