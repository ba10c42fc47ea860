"""Synthetic psychiatric questionnaire tables: generation and evaluation."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __doc__  # noqa: F401
except ImportError:  # plain CMake builds put _core on sys.path directly
    from _core import *  # noqa: F401,F403
