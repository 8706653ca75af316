"""Word growth of finitely generated groups.

The heavy lifting lives in the _growthlab extension module; this package
re-exports its surface.
"""

from ._growthlab import (  # noqa: F401
    Group,
    GrowthlabError,
    ParameterError,
    __version__,
    char_poly,
    lambda_max,
    load,
    osin_lower_bound,
    unit_circle_test,
)

__all__ = [
    "Group",
    "GrowthlabError",
    "ParameterError",
    "char_poly",
    "lambda_max",
    "load",
    "osin_lower_bound",
    "unit_circle_test",
    "__version__",
]
