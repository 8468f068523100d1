"""Python bindings for the fundtext pipeline."""

from ._fundtext import *  # noqa: F401,F403
from ._fundtext import Error, ValidationError, __doc__  # noqa: F401
