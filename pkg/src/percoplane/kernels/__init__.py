"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled Cython module is preferred when importable; setting the
environment variable ``PERCOPLANE_PURE=1`` forces the fallback.  Both
backends consume identical counter-based random streams (see ``rng``), so
for a given seed they return bit-identical results; ``tests/test_kernels.py``
asserts this and ``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

from . import pure

if os.environ.get("PERCOPLANE_PURE") == "1":
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

contact_final_masks = _impl.contact_final_masks
sample_reach_masks = _impl.sample_reach_masks
chain_visit_counts = _impl.chain_visit_counts


def backend_name() -> str:
    return BACKEND


def backends():
    """All importable backends as (name, module) pairs."""
    out = [("pure", pure)]
    try:
        from . import _speedups
        out.append(("compiled", _speedups))
    except ImportError:
        pass
    return out
