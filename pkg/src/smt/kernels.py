"""Hot numeric kernels: stable-law transforms and box-maximum reduction.

Two interchangeable backends provide the same three functions: a numba
``@njit`` fast path and a pure-numpy fallback.  The backend is chosen once
at import time from the ``SMT_NUMBA`` environment variable:

* unset or ``auto``: use numba when importable, numpy otherwise;
* ``0`` / ``off`` / ``false`` / ``numpy``: force the numpy path;
* ``1`` / ``on`` / ``true`` / ``numba``: require numba, raise if missing.

All randomness is drawn outside the kernels, so both backends consume
identical input arrays and agree up to libm rounding (a few ulp).  Inputs
are assumed finite; ``abs_max`` does not look for NaNs.
"""

import os

import numpy as np

# Smallest positive normal double.  Exponential and uniform draws are clamped
# here so an exact-zero draw (probability ~2**-53 per draw) cannot become a
# NaN via 0/0 or 0**0.  The clamped value may still overflow to inf when the
# tail exponent exceeds 1; the statistic layer reports that as an error
# instead of propagating it silently.
TINY = float(np.finfo(np.float64).tiny)


def _sas_values_numpy(u, w, alpha):
    """Map uniforms ``u`` in [0, 1) and unit exponentials ``w`` to draws from
    the standard symmetric alpha-stable law (angle/exponential transform)."""
    v = np.pi * (u - 0.5)
    w = np.maximum(w, TINY)
    inv_a = 1.0 / alpha
    rem = (1.0 - alpha) * inv_a
    return np.sin(alpha * v) / np.cos(v) ** inv_a * (np.cos((1.0 - alpha) * v) / w) ** rem


def _positive_stable_values_numpy(u, w, index):
    """Map uniforms/exponentials to one-sided positive stable draws normalized
    so that E[exp(-t*A)] = exp(-t**index) for 0 < index < 1 (Kanter form)."""
    theta = np.pi * np.maximum(u, TINY)
    w = np.maximum(w, TINY)
    rem = (1.0 - index) / index
    return (
        np.sin(index * theta)
        / np.sin(theta) ** (1.0 / index)
        * (np.sin((1.0 - index) * theta) / w) ** rem
    )


def _abs_max_numpy(a):
    return float(np.abs(a).max())


NUMPY_IMPLS = {
    "sas_values": _sas_values_numpy,
    "positive_stable_values": _positive_stable_values_numpy,
    "abs_max": _abs_max_numpy,
}


def _build_numba_impls():
    from numba import njit

    # error_model="numpy": scalar x/0 follows IEEE (inf), matching the fallback
    jit = njit(cache=True, nogil=True, error_model="numpy")

    @jit
    def sas_values(u, w, alpha):
        n = u.shape[0]
        out = np.empty(n, dtype=np.float64)
        inv_a = 1.0 / alpha
        rem = (1.0 - alpha) * inv_a
        for i in range(n):
            v = np.pi * (u[i] - 0.5)
            wi = w[i]
            if wi < TINY:
                wi = TINY
            out[i] = (
                np.sin(alpha * v)
                / np.cos(v) ** inv_a
                * (np.cos((1.0 - alpha) * v) / wi) ** rem
            )
        return out

    @jit
    def positive_stable_values(u, w, index):
        n = u.shape[0]
        out = np.empty(n, dtype=np.float64)
        inv_g = 1.0 / index
        rem = (1.0 - index) * inv_g
        for i in range(n):
            ui = u[i]
            if ui < TINY:
                ui = TINY
            wi = w[i]
            if wi < TINY:
                wi = TINY
            theta = np.pi * ui
            out[i] = (
                np.sin(index * theta)
                / np.sin(theta) ** inv_g
                * (np.sin((1.0 - index) * theta) / wi) ** rem
            )
        return out

    @jit
    def abs_max(a):
        m = 0.0
        for x in a.flat:
            ax = abs(x)
            if ax > m:
                m = ax
        return m

    return {
        "sas_values": sas_values,
        "positive_stable_values": positive_stable_values,
        "abs_max": abs_max,
    }


try:
    NUMBA_IMPLS = _build_numba_impls()
    _numba_error = None
except ImportError as exc:  # pragma: no cover - depends on environment
    NUMBA_IMPLS = None
    _numba_error = exc


def choose_backend(env_value, numba_available):
    """Resolve the SMT_NUMBA setting to a backend name."""
    v = (env_value or "auto").strip().lower()
    if v in ("0", "off", "false", "no", "numpy"):
        return "numpy"
    if v in ("1", "on", "true", "yes", "numba"):
        if not numba_available:
            raise ImportError(
                "SMT_NUMBA=%r requires numba, which is not importable" % env_value
            )
        return "numba"
    return "numba" if numba_available else "numpy"


BACKEND = choose_backend(os.environ.get("SMT_NUMBA"), NUMBA_IMPLS is not None)
_impls = NUMBA_IMPLS if BACKEND == "numba" else NUMPY_IMPLS

sas_values = _impls["sas_values"]
positive_stable_values = _impls["positive_stable_values"]
abs_max = _impls["abs_max"]
