"""Hot numeric kernels: phasor-sum trace synthesis and running-mean / FIR
filtering.

Two interchangeable implementations are provided: numba ``@njit`` loops and
a pure-numpy fallback. Selection happens once at import time via the
``MZERASER_KERNELS`` environment variable:

* ``auto`` (default): jitted kernels when numba imports cleanly, else numpy;
* ``numba``: require the jitted path (ImportError if numba is missing);
* ``numpy``: force the fallback.

Both paths implement the same arithmetic; they agree to ~1e-12 relative
(summation order differs slightly). ``benchmarks/bench_kernels.py`` times
one against the other.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "active_backend",
    "intensity_series",
    "amplitude_series",
    "moving_average",
    "fir_convolve",
    "NUMPY_IMPLS",
    "JIT_IMPLS",
]

_TWO_PI = 2.0 * math.pi


# -- pure numpy implementations ------------------------------------------


def _np_intensity_series(amp_h, amp_v, freqs, times):
    rot = np.exp((1j * _TWO_PI) * np.outer(freqs, times))
    h = amp_h @ rot
    v = amp_v @ rot
    return (h.real * h.real + h.imag * h.imag) + (v.real * v.real + v.imag * v.imag)


def _np_amplitude_series(amps, freqs, times):
    rot = np.exp((1j * _TWO_PI) * np.outer(freqs, times))
    return amps @ rot


def _np_moving_average(x, window):
    kernel = np.full(window, 1.0 / window)
    return np.convolve(x, kernel, mode="valid")


def _np_fir_convolve(x, taps):
    # taps are symmetric by construction, so convolution == correlation
    return np.convolve(x, taps, mode="valid")


NUMPY_IMPLS = {
    "intensity_series": _np_intensity_series,
    "amplitude_series": _np_amplitude_series,
    "moving_average": _np_moving_average,
    "fir_convolve": _np_fir_convolve,
}


# -- numba implementations -------------------------------------------------


def _build_jit_impls():
    from numba import njit

    @njit(cache=True)
    def intensity_series(amp_h, amp_v, freqs, times):
        n = times.shape[0]
        out = np.empty(n, dtype=np.float64)
        for k in range(n):
            h = 0.0j
            v = 0.0j
            for j in range(freqs.shape[0]):
                ph = _TWO_PI * freqs[j] * times[k]
                rot = complex(math.cos(ph), math.sin(ph))
                h += amp_h[j] * rot
                v += amp_v[j] * rot
            out[k] = (h.real * h.real + h.imag * h.imag) + (
                v.real * v.real + v.imag * v.imag
            )
        return out

    @njit(cache=True)
    def amplitude_series(amps, freqs, times):
        n = times.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for k in range(n):
            acc = 0.0j
            for j in range(freqs.shape[0]):
                ph = _TWO_PI * freqs[j] * times[k]
                acc += amps[j] * complex(math.cos(ph), math.sin(ph))
            out[k] = acc
        return out

    @njit(cache=True)
    def moving_average(x, window):
        n = x.shape[0] - window + 1
        out = np.zeros_like(x[:n])
        for j in range(n):
            s = x[j]
            for k in range(1, window):
                s = s + x[j + k]
            out[j] = s / window
        return out

    @njit(cache=True)
    def fir_convolve(x, taps):
        w = taps.shape[0]
        n = x.shape[0] - w + 1
        out = np.zeros_like(x[:n])
        for j in range(n):
            s = x[j] * taps[0]
            for k in range(1, w):
                s = s + x[j + k] * taps[k]
            out[j] = s
        return out

    return {
        "intensity_series": intensity_series,
        "amplitude_series": amplitude_series,
        "moving_average": moving_average,
        "fir_convolve": fir_convolve,
    }


_flag = os.environ.get("MZERASER_KERNELS", "auto").strip().lower()
if _flag not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"MZERASER_KERNELS must be 'auto', 'numba' or 'numpy', got {_flag!r}"
    )

JIT_IMPLS = None
if _flag in ("auto", "numba"):
    try:
        JIT_IMPLS = _build_jit_impls()
    except ImportError:
        if _flag == "numba":
            raise

_ACTIVE = JIT_IMPLS if JIT_IMPLS is not None else NUMPY_IMPLS
_BACKEND_NAME = "numba" if JIT_IMPLS is not None else "numpy"


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return _BACKEND_NAME


def intensity_series(amp_h, amp_v, freqs, times) -> np.ndarray:
    """Samples of |sum_j (amp_h_j, amp_v_j) e^{i 2 pi f_j t}|^2."""
    return _ACTIVE["intensity_series"](
        np.ascontiguousarray(amp_h, dtype=np.complex128),
        np.ascontiguousarray(amp_v, dtype=np.complex128),
        np.ascontiguousarray(freqs, dtype=np.float64),
        np.ascontiguousarray(times, dtype=np.float64),
    )


def amplitude_series(amps, freqs, times) -> np.ndarray:
    """Samples of sum_j amp_j e^{i 2 pi f_j t} (complex)."""
    return _ACTIVE["amplitude_series"](
        np.ascontiguousarray(amps, dtype=np.complex128),
        np.ascontiguousarray(freqs, dtype=np.float64),
        np.ascontiguousarray(times, dtype=np.float64),
    )


def moving_average(x, window: int) -> np.ndarray:
    """Running mean over ``window`` samples, valid region only."""
    x = np.ascontiguousarray(x)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if window > x.shape[0]:
        raise ValueError(f"window {window} longer than input ({x.shape[0]} samples)")
    return _ACTIVE["moving_average"](x, window)


def fir_convolve(x, taps) -> np.ndarray:
    """Valid-mode convolution of ``x`` with symmetric filter taps."""
    x = np.ascontiguousarray(x)
    taps = np.ascontiguousarray(taps, dtype=np.float64)
    if taps.shape[0] > x.shape[0]:
        raise ValueError(
            f"filter ({taps.shape[0]} taps) longer than input ({x.shape[0]} samples)"
        )
    return _ACTIVE["fir_convolve"](x, taps)
