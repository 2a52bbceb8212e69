"""UAV base-station simulator and policy-training core."""

from ._uavsim import *  # noqa: F401,F403
from ._uavsim import __doc__  # noqa: F401
