"""Python interface to the syge graph-embedding toolkit.

Installed wheels carry the extension inside this package. For in-tree use,
put the CMake build directory on sys.path ahead of this file's parent and the
top-level _syge module is picked up instead.
"""

try:
    from ._syge import *  # noqa: F401,F403
    from ._syge import __doc__ as _core_doc
except ImportError:
    from _syge import *  # noqa: F401,F403
    from _syge import __doc__ as _core_doc

__doc__ = (__doc__ or "") + "\n" + (_core_doc or "")
__version__ = "0.1.0"
