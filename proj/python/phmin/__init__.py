from ._phmin import *  # noqa: F401,F403
