from .polynomial import AbstractDirectionalExpander, SympyDirectionalExpander
