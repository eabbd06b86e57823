"""Exact-arithmetic irreducible representations of finite algebra groups."""

try:
    from ._algroups import *
    from ._algroups import __version__
except ImportError:
    # build-tree layout: the extension sits next to the package directory
    from _algroups import *
    from _algroups import __version__
