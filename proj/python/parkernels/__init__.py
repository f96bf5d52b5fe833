"""Fork-join matrix multiplication and quicksort with an overhead-calibrated dispatcher."""

from ._parkernels import *  # noqa: F401,F403
from ._parkernels import __doc__  # noqa: F401
