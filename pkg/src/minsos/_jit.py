"""Optional numba acceleration.

The hot numerical kernels are written in plain scalar-loop style so that the
same source runs either compiled by numba or interpreted with numpy.  Set the
environment variable MINSOS_NO_NUMBA=1 (before import) to force the pure
Python path; by default numba is used when importable.
"""

import os

DISABLE = os.environ.get("MINSOS_NO_NUMBA", "0") not in ("0", "", "false", "False")

try:
    if DISABLE:
        raise ImportError
    import numba

    have_numba = True
except ImportError:
    have_numba = False


def _passthrough(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrapper(func):
        return func

    return wrapper


if have_numba:
    jit = numba.njit
else:
    jit = _passthrough

JIT_OPTIONS = {"cache": True, "fastmath": True}


def backend_name():
    return "numba" if have_numba else "numpy"
