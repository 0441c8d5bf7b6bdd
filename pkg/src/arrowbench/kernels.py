"""Backend selection for the hot search kernels.

At import time the compiled extension (_kernels_c) is preferred when it
built successfully; otherwise the pure-Python twin is used.  Setting the
environment variable ARROWBENCH_PURE=1 forces the pure backend, which the
kernel-equivalence tests and the benchmark rely on.
"""

import os

from arrowbench import _kernels_py

try:
    from arrowbench import _kernels_c
except ImportError:  # extension not built on this install
    _kernels_c = None

_FORCE_PURE = os.environ.get("ARROWBENCH_PURE") == "1"


def backend_name() -> str:
    """Which backend the binary-signature kernel dispatches to."""
    return "compiled" if (_kernels_c is not None and not _FORCE_PURE) else "pure-python"


def embeddings_binary(na, nb, labels_a, labels_b, n_adj, a_flat, b_flat, first_only=False):
    if _kernels_c is not None and not _FORCE_PURE:
        return _kernels_c.embeddings_binary(
            na, nb, labels_a, labels_b, n_adj, a_flat, b_flat, first_only
        )
    return _kernels_py.embeddings_binary(
        na, nb, labels_a, labels_b, n_adj, a_flat, b_flat, first_only
    )


def embeddings_generic(na, nb, level_checks, b_sets, first_only=False):
    # no compiled twin: arities >= 3 are rare and never dominate a run
    return _kernels_py.embeddings_generic(na, nb, level_checks, b_sets, first_only)
