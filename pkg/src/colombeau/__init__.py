"""Numerical Colombeau generalized functions: nets, seminorms, growth classification and integral operators."""

__version__ = "0.1.0"

from .core import *  # noqa: E402,F401,F403
from .weights import *  # noqa: E402,F401,F403
from .quadrature import *  # noqa: E402,F401,F403
from .seminorms import *  # noqa: E402,F401,F403
from .hermite import *  # noqa: E402,F401,F403
from .operators import *  # noqa: E402,F401,F403
from .catalog import ConfigError, make_field, make_kernel, make_net, make_operator  # noqa: E402,F401
