"""Transfer operations of the optical elements: balanced beam splitter,
polarizing beam splitter, polarizer, half-wave plate, phase shifter and
AOM frequency shifter.

Conventions, fixed once and asserted by tests downstream:

* balanced BS, symmetric i-reflection:
  ``out1 = (in1 + i in2)/sqrt2``, ``out2 = (i in1 + in2)/sqrt2``.
* PBS: H transmits (in1 -> outB, in2 -> outA), V reflects with phase -i
  (in1 -> outA, in2 -> outB). This choice makes the assembled
  interferometer emit ``(-V1, +H2)`` at port A and ``(+H1, +V2)`` at port B
  up to one global phase per port; the relative sign inside port A is
  load-bearing, it decides cos^2(xi+theta) versus cos^2(xi-theta) in the
  low-pass-selected correlation.
* mirrors are absorbed into arm phases.

All operations are pure functions over immutable fields.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import replace

import numpy as np

from .fields import PortField, superpose

__all__ = [
    "polarizer_projector",
    "hwp_matrix",
    "apply_jones",
    "phase_apply",
    "aom_apply",
    "bs_apply",
    "pbs_apply",
]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def polarizer_projector(alpha: float) -> np.ndarray:
    """Jones projector onto the axis (cos a, sin a).

    Hermitian, idempotent, trace 1; output Jones pairs are always
    proportional to the axis.
    """
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c * c, s * c], [s * c, s * s]], dtype=complex)


def hwp_matrix(alpha: float) -> np.ndarray:
    """Half-wave plate with fast axis at angle a: unitary
    [[cos 2a, sin 2a], [sin 2a, -cos 2a]]. At a = pi/8 it maps H onto the
    diagonal axis with unit norm (the lossless alternative to a 45 degree
    polarizer)."""
    c2, s2 = math.cos(2.0 * alpha), math.sin(2.0 * alpha)
    return np.array([[c2, s2], [s2, -c2]], dtype=complex)


def apply_jones(field: PortField, matrix: np.ndarray) -> PortField:
    """Apply a 2x2 Jones matrix to every tone; offsets and labels untouched."""
    m = np.asarray(matrix, dtype=complex)
    out = []
    for t in field.tones:
        h = m[0, 0] * t.jones_h + m[0, 1] * t.jones_v
        v = m[1, 0] * t.jones_h + m[1, 1] * t.jones_v
        out.append(replace(t, jones_h=complex(h), jones_v=complex(v)))
    return PortField(tuple(out))


def phase_apply(field: PortField, phi: float) -> PortField:
    """Multiply every tone by e^{i phi}; pure phase, offsets untouched."""
    return field.scaled(cmath.exp(1j * phi))


def aom_apply(field: PortField, sign: int, delta_f: float) -> PortField:
    """Shift every tone's offset by sign*delta_f and stamp the label.

    Each arm holds a single modulator, so a tone may pass one AOM only:
    a second application raises.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    if not delta_f > 0:
        raise ValueError(f"delta_f must be positive, got {delta_f!r}")
    out = []
    for t in field.tones:
        if t.label.detuning_sign is not None:
            raise ValueError(f"tone {t.label} already carries an AOM shift")
        out.append(
            replace(
                t,
                freq_offset=t.freq_offset + sign * delta_f,
                label=replace(t.label, detuning_sign=sign),
            )
        )
    return PortField(tuple(out))


def bs_apply(in1: PortField, in2: PortField) -> tuple[PortField, PortField]:
    """Balanced beam splitter, symmetric i-reflection convention.

    Power-conserving; tones sharing (offset, label) merge coherently."""
    out1 = superpose(in1.scaled(_INV_SQRT2), in2.scaled(1j * _INV_SQRT2))
    out2 = superpose(in1.scaled(1j * _INV_SQRT2), in2.scaled(_INV_SQRT2))
    return out1, out2


def pbs_apply(in1: PortField, in2: PortField) -> tuple[PortField, PortField]:
    """Polarizing beam splitter with the module's fixed reflection phase.

    H of in1 -> outB, V of in1 -> outA, H of in2 -> outA, V of in2 -> outB.
    Reflected (V) components pick up -i; transmitted (H) components pass
    unchanged. Mixed tones split into pure-polarization tones tagged with
    their ``pol_origin``; exactly-zero components are dropped.
    """
    a, b = [], []
    for t in in1.tones:
        if t.jones_h != 0:
            b.append(replace(t, jones_v=0j, label=replace(t.label, pol_origin="H")))
        if t.jones_v != 0:
            a.append(
                replace(
                    t,
                    jones_h=0j,
                    jones_v=-1j * t.jones_v,
                    label=replace(t.label, pol_origin="V"),
                )
            )
    for t in in2.tones:
        if t.jones_h != 0:
            a.append(replace(t, jones_v=0j, label=replace(t.label, pol_origin="H")))
        if t.jones_v != 0:
            b.append(
                replace(
                    t,
                    jones_h=0j,
                    jones_v=-1j * t.jones_v,
                    label=replace(t.label, pol_origin="V"),
                )
            )
    return PortField(tuple(a)), PortField(tuple(b))
