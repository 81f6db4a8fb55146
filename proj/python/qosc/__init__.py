"""Generalized deformed oscillator ladders, discrete q-Hermite-type
polynomial families, orthogonality measures, spectra, and coherent states.

The compiled extension lives inside this package in an installed wheel; in a
plain CMake build tree it sits next to the package on ``PYTHONPATH``.
"""

try:
    from ._qosc import *  # noqa: F401,F403
    from ._qosc import __version__  # noqa: F401
except ImportError:  # build-tree layout
    from _qosc import *  # noqa: F401,F403
    from _qosc import __version__  # noqa: F401
