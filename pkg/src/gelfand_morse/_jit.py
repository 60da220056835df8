"""JIT switch for the numeric kernels.

Set ``GELFAND_MORSE_NO_JIT=1`` to run every kernel through the interpreter
(vectorized numpy where a vectorized form exists). Useful for debugging and
for the benchmark in ``benchmarks/``.
"""

import os

_FLAG = os.environ.get("GELFAND_MORSE_NO_JIT", "").strip().lower()
JIT_ENABLED = _FLAG not in ("1", "true", "yes", "on")

if JIT_ENABLED:
    try:
        from numba import njit as _numba_njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if JIT_ENABLED:

    def njit(func=None, **kwargs):
        kwargs.setdefault("cache", True)
        if func is not None:
            return _numba_njit(**kwargs)(func)
        return _numba_njit(**kwargs)

else:

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper


def py_func(kernel):
    """Interpreted version of a kernel, whether or not it was compiled."""
    return getattr(kernel, "py_func", kernel)
