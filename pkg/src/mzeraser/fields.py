"""Value types and arithmetic for multi-tone polarized optical fields.

Everything lives in a rotating frame at the laser carrier: a tone's
``freq_offset`` is its detuning from the carrier in Hz, and every static
phase (interferometer phase, element phases) is folded into the complex
Jones amplitudes. Time-averaged intensities then follow the usual rule:
tones at equal offsets add in amplitude, tones at distinct offsets add in
power (their cross terms average to zero).

All types are immutable values and all operations are pure, so fields can
be shared and evaluated in parallel freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "ToneLabel",
    "Tone",
    "PortField",
    "superpose",
    "time_avg_power",
]


@dataclass(frozen=True)
class ToneLabel:
    """Provenance tag: interferometer arm, polarization component at the
    combiner, and the sign of the AOM shift the tone carries.

    Labels are pure bookkeeping. No numeric output of this module may depend
    on them; two fields differing only in labels produce identical
    intensities. ``detuning_sign`` stays None until an AOM has acted.
    """

    path: int | None = None
    pol_origin: str | None = None
    detuning_sign: int | None = None

    def __post_init__(self):
        if self.path not in (None, 1, 2):
            raise ValueError(f"path must be 1 or 2, got {self.path!r}")
        if self.pol_origin not in (None, "H", "V"):
            raise ValueError(f"pol_origin must be 'H' or 'V', got {self.pol_origin!r}")
        if self.detuning_sign not in (None, 1, -1):
            raise ValueError(f"detuning_sign must be +1 or -1, got {self.detuning_sign!r}")

    def __str__(self):
        pol = self.pol_origin if self.pol_origin is not None else "?"
        path = self.path if self.path is not None else "?"
        if self.detuning_sign is None:
            return f"{pol}{path}"
        return f"{pol}{path}{'+' if self.detuning_sign > 0 else '-'}"


def _require_finite_complex(name: str, z: complex):
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")


@dataclass(frozen=True)
class Tone:
    """One monochromatic polarized field component.

    ``jones_h``/``jones_v`` are complex amplitudes in sqrt-intensity units;
    ``freq_offset`` is the detuning from the carrier in Hz and carries no
    phase of its own.
    """

    jones_h: complex
    jones_v: complex
    freq_offset: float = 0.0
    label: ToneLabel = ToneLabel()

    def __post_init__(self):
        _require_finite_complex("jones_h", complex(self.jones_h))
        _require_finite_complex("jones_v", complex(self.jones_v))
        if not math.isfinite(self.freq_offset):
            raise ValueError("freq_offset must be finite")

    @property
    def power(self) -> float:
        return abs(self.jones_h) ** 2 + abs(self.jones_v) ** 2

    def scaled(self, factor: complex) -> "Tone":
        return replace(self, jones_h=self.jones_h * factor, jones_v=self.jones_v * factor)


@dataclass(frozen=True)
class PortField:
    """The set of tones present at one spatial port."""

    tones: tuple[Tone, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tones", tuple(self.tones))

    @classmethod
    def empty(cls) -> "PortField":
        return cls(())

    def max_offset(self) -> float:
        return max((abs(t.freq_offset) for t in self.tones), default=0.0)

    def scaled(self, factor: complex) -> "PortField":
        return PortField(tuple(t.scaled(factor) for t in self.tones))


def superpose(a: PortField, b: PortField) -> PortField:
    """Concatenate two port fields, merging tones that share both
    ``freq_offset`` and ``label`` by complex addition of their Jones pairs."""
    merged: dict[tuple[float, ToneLabel], Tone] = {}
    for tone in (*a.tones, *b.tones):
        key = (tone.freq_offset, tone.label)
        prev = merged.get(key)
        if prev is None:
            merged[key] = tone
        else:
            merged[key] = replace(
                prev,
                jones_h=prev.jones_h + tone.jones_h,
                jones_v=prev.jones_v + tone.jones_v,
            )
    return PortField(tuple(merged.values()))


def time_avg_power(field: PortField) -> float:
    """Infinite-horizon time average of |E(t)|^2.

    Jones components are summed coherently within each frequency-offset
    group (equal-frequency tones interfere regardless of label), then the
    group powers add.
    """
    acc: dict[float, list[complex]] = {}
    for tone in field.tones:
        group = acc.setdefault(tone.freq_offset, [0j, 0j])
        group[0] += tone.jones_h
        group[1] += tone.jones_v
    return float(sum(abs(h) ** 2 + abs(v) ** 2 for h, v in acc.values()))
