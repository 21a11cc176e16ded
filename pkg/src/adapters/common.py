from typing import TypeVar, Callable
from functools import wraps

from pydantic import ValidationError

from src.exceptions import BaseAppError, AnalysisError

T = TypeVar('T')


def error_handler(func: Callable[..., T]) -> Callable[..., T]:
    @wraps(func)
    def wrapper(self, *args, **kwargs) -> T:
        try:
            return func(self, *args, **kwargs)
        except BaseAppError:
            raise
        except ValidationError as e:
            raise AnalysisError(
                f"Validation/Data mapping error in analysis method: {func.__name__}",
                original_error=e
            ) from e
        except Exception as e:
            raise AnalysisError(
                f"Unexpected error in analysis method: {func.__name__}",
                original_error=e
            ) from e
    return wrapper
