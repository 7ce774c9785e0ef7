from _hypdet import *  # noqa: F401,F403
from _hypdet import __version__  # noqa: F401
