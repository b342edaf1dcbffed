"""Assembly of the two-arm heterodyne interferometer and its eraser variants.

Topology (fixed preset, selected by flags rather than a circuit DSL):

    source -> BS -> per-arm AOM (opposite signs, +/- delta_f)
           -> inner prep (45 degree polarizer, or HWP at 22.5 degrees)
           -> phase phi on arm 1
           -> combiner (PBS, or balanced BS for the eraser variant)
           -> optional output analyzers (xi on port A, theta on port B)

With the PBS combiner and no analyzers each port carries exactly two tones
of orthogonal polarization origin at opposite detunings, so the
time-averaged port powers are phase-independent (orthogonally polarized
fields do not interfere). Canonical amplitudes, up to one global phase per
port:

    port A: (-V1 e^{i phi} at +s df,  +H2 at -s df) * kappa
    port B: (+H1 e^{i phi} at +s df,  +V2 at -s df) * kappa

where kappa is the per-component amplitude at the combiner (sqrt(I0)/2
under the LosslessProjection convention).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .elements import (
    aom_apply,
    apply_jones,
    bs_apply,
    pbs_apply,
    phase_apply,
    polarizer_projector,
    hwp_matrix,
)
from .errors import ConfigError
from .fields import PortField, Tone, time_avg_power

__all__ = [
    "COMBINERS",
    "INNER_PREPS",
    "SIGN_POLICIES",
    "LOSS_CONVENTIONS",
    "SchemeConfig",
    "PropagationResult",
    "propagate",
    "FringeScan",
    "eraser_fringe_scan",
    "PortCheck",
    "CanonicalFormReport",
    "assert_canonical_form",
]

COMBINERS = ("PBS", "BS")
INNER_PREPS = ("Polarizer45", "HWP225")
SIGN_POLICIES = ("Fixed(+)", "Fixed(-)", "RandomPerShot")
# LosslessProjection: every labeled component reaching the combiner carries
# amplitude sqrt(I0)/2, i.e. the 50% projector loss is compensated (the
# usual bookkeeping for this scheme). EnergyConserving keeps raw physical
# amplitudes, halving every port power when the inner prep is a polarizer.
# All shape-level results (visibility, fringe laws) agree between the two.
LOSS_CONVENTIONS = ("LosslessProjection", "EnergyConserving")

_CONFIG_FIELDS = (
    "intensity_I0",
    "delta_f",
    "phi",
    "combiner",
    "inner_prep",
    "analyzer_xi",
    "analyzer_theta",
    "sign_policy",
    "loss_convention",
)


@dataclass(frozen=True)
class SchemeConfig:
    """Full description of one optical topology variant.

    Angles in radians, frequencies in Hz; ``intensity_I0`` is the source
    power just before the first splitter.
    """

    intensity_I0: float = 1.0
    delta_f: float = 1.0e4
    phi: float = 0.0
    combiner: str = "PBS"
    inner_prep: str = "Polarizer45"
    analyzer_xi: float | None = None
    analyzer_theta: float | None = None
    sign_policy: str = "Fixed(+)"
    loss_convention: str = "LosslessProjection"

    def validate(self) -> None:
        if not (math.isfinite(self.intensity_I0) and self.intensity_I0 > 0):
            raise ConfigError(f"intensity_I0 must be > 0, got {self.intensity_I0!r}")
        if not (math.isfinite(self.delta_f) and self.delta_f > 0):
            raise ConfigError(f"delta_f must be > 0, got {self.delta_f!r}")
        if not math.isfinite(self.phi):
            raise ConfigError(f"phi must be finite, got {self.phi!r}")
        if self.combiner not in COMBINERS:
            raise ConfigError(f"combiner must be one of {COMBINERS}, got {self.combiner!r}")
        if self.inner_prep not in INNER_PREPS:
            raise ConfigError(f"inner_prep must be one of {INNER_PREPS}, got {self.inner_prep!r}")
        if self.sign_policy not in SIGN_POLICIES:
            raise ConfigError(f"sign_policy must be one of {SIGN_POLICIES}, got {self.sign_policy!r}")
        if self.loss_convention not in LOSS_CONVENTIONS:
            raise ConfigError(
                f"loss_convention must be one of {LOSS_CONVENTIONS}, got {self.loss_convention!r}"
            )
        for name in ("analyzer_xi", "analyzer_theta"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ConfigError(f"{name} must be finite or null, got {value!r}")

    def fixed_sign(self) -> int | None:
        """+1 / -1 for the Fixed policies, None for RandomPerShot."""
        if self.sign_policy == "Fixed(+)":
            return 1
        if self.sign_policy == "Fixed(-)":
            return -1
        return None

    def kappa(self) -> float:
        """Per-component amplitude at the combiner."""
        base = math.sqrt(self.intensity_I0) / 2.0
        if self.loss_convention == "EnergyConserving" and self.inner_prep == "Polarizer45":
            return base / math.sqrt(2.0)
        return base

    def beat_freq(self) -> float:
        """Intensity beat frequency between the two detuned components."""
        return 2.0 * self.delta_f

    def to_json_dict(self) -> dict:
        return {
            "intensity_I0": self.intensity_I0,
            "delta_f": self.delta_f,
            "phi": self.phi,
            "combiner": self.combiner,
            "inner_prep": self.inner_prep,
            "analyzer_xi": self.analyzer_xi,
            "analyzer_theta": self.analyzer_theta,
            "sign_policy": self.sign_policy,
            "loss_convention": self.loss_convention,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SchemeConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"scheme config must be an object, got {type(data).__name__}")
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ConfigError(f"unknown scheme config fields: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SchemeConfig":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class PropagationResult:
    """Output tone lists at both ports for one deterministic sign choice."""

    port_a: PortField
    port_b: PortField
    sign_used: int
    config: SchemeConfig


def _resolve_sign(cfg: SchemeConfig, sign: int | None) -> int:
    if sign is None:
        sign = cfg.fixed_sign()
        if sign is None:
            raise ConfigError("sign_policy is RandomPerShot; pass an explicit sign")
    if sign not in (1, -1):
        raise ConfigError(f"sign must be +1 or -1, got {sign!r}")
    return sign


def _tag_path(port: PortField, path: int) -> PortField:
    return PortField(tuple(replace(t, label=replace(t.label, path=path)) for t in port.tones))


def _prep_matrix(cfg: SchemeConfig) -> np.ndarray:
    if cfg.inner_prep == "Polarizer45":
        return polarizer_projector(math.pi / 4.0)
    return hwp_matrix(math.pi / 8.0)


def propagate(cfg: SchemeConfig, sign: int | None = None, *, aom_enabled: bool = True) -> PropagationResult:
    """Propagate the source field symbolically to the two output ports.

    ``sign`` is the detuning sign of arm 1 for this shot (arm 2 takes the
    negation); when omitted it is resolved from ``sign_policy``.
    ``aom_enabled=False`` bypasses the frequency shifters, leaving both
    arms at the carrier (used by the eraser fringe scan).
    """
    cfg.validate()
    s = _resolve_sign(cfg, sign)

    source = PortField((Tone(jones_h=complex(math.sqrt(cfg.intensity_I0)), jones_v=0j),))
    arm1, arm2 = bs_apply(source, PortField.empty())
    arm1 = _tag_path(arm1, 1)
    arm2 = _tag_path(arm2, 2)

    if aom_enabled:
        arm1 = aom_apply(arm1, s, cfg.delta_f)
        arm2 = aom_apply(arm2, -s, cfg.delta_f)

    prep = _prep_matrix(cfg)
    arm1 = apply_jones(arm1, prep)
    arm2 = apply_jones(arm2, prep)
    if cfg.loss_convention == "LosslessProjection" and cfg.inner_prep == "Polarizer45":
        # compensate the 50% projector loss so each component carries kappa
        arm1 = arm1.scaled(math.sqrt(2.0))
        arm2 = arm2.scaled(math.sqrt(2.0))

    arm1 = phase_apply(arm1, cfg.phi)

    if cfg.combiner == "PBS":
        port_a, port_b = pbs_apply(arm1, arm2)
    else:
        port_a, port_b = bs_apply(arm1, arm2)

    if cfg.analyzer_xi is not None:
        port_a = apply_jones(port_a, polarizer_projector(cfg.analyzer_xi))
    if cfg.analyzer_theta is not None:
        port_b = apply_jones(port_b, polarizer_projector(cfg.analyzer_theta))

    return PropagationResult(port_a=port_a, port_b=port_b, sign_used=s, config=cfg)


@dataclass(frozen=True)
class FringeScan:
    """Time-averaged port powers over a phase grid."""

    phi: np.ndarray
    i_a: np.ndarray
    i_b: np.ndarray


def eraser_fringe_scan(cfg: SchemeConfig, phi_values) -> FringeScan:
    """Static interference fringes of the BS-combined (eraser) variant.

    The AOM shifts are bypassed here: with symmetric detuning the
    time-averaged power is phase-independent for any combiner, so the
    static fringe this scan characterizes exists at zero detuning, where
    the inner prep has restored a common polarization and interference
    returns. Ports are complementary, I_A(phi) + I_B(phi) is constant.
    """
    cfg.validate()
    if cfg.combiner != "BS":
        raise ConfigError(f"eraser scan needs combiner='BS', got {cfg.combiner!r}")
    if cfg.analyzer_xi is not None or cfg.analyzer_theta is not None:
        raise ConfigError("eraser scan needs both analyzers absent")
    sign = cfg.fixed_sign() or 1

    phi = np.asarray(list(phi_values), dtype=float)
    i_a = np.empty_like(phi)
    i_b = np.empty_like(phi)
    for k, value in enumerate(phi):
        result = propagate(replace(cfg, phi=float(value)), sign, aom_enabled=False)
        i_a[k] = time_avg_power(result.port_a)
        i_b[k] = time_avg_power(result.port_b)
    return FringeScan(phi=phi, i_a=i_a, i_b=i_b)


# -- canonical-form check ---------------------------------------------------


@dataclass
class PortCheck:
    name: str
    ok: bool
    residual_phase: float | None
    messages: list[str] = field(default_factory=list)


@dataclass
class CanonicalFormReport:
    """Tone-by-tone comparison against the canonical coefficient structure."""

    ok: bool
    port_a: PortCheck
    port_b: PortCheck


def _tone_scalar(tone: Tone, analyzer: float | None) -> complex:
    if analyzer is None:
        return tone.jones_h if tone.label.pol_origin == "H" else tone.jones_v
    return tone.jones_h * math.cos(analyzer) + tone.jones_v * math.sin(analyzer)


def _expected_port(cfg: SchemeConfig, sign: int, port: str):
    k = cfg.kappa()
    ephi = cmath.exp(1j * cfg.phi)
    if port == "A":
        ang = cfg.analyzer_xi
        f_arm1 = math.sin(ang) if ang is not None else 1.0
        f_arm2 = math.cos(ang) if ang is not None else 1.0
        return [
            ((1, "V"), sign * cfg.delta_f, -k * ephi * f_arm1),
            ((2, "H"), -sign * cfg.delta_f, k * f_arm2),
        ]
    ang = cfg.analyzer_theta
    f_arm1 = math.cos(ang) if ang is not None else 1.0
    f_arm2 = math.sin(ang) if ang is not None else 1.0
    return [
        ((1, "H"), sign * cfg.delta_f, k * ephi * f_arm1),
        ((2, "V"), -sign * cfg.delta_f, k * f_arm2),
    ]


def _check_port(port_field: PortField, expected, analyzer: float | None,
                name: str, scale: float, tol: float) -> PortCheck:
    messages: list[str] = []
    by_key: dict[tuple, Tone] = {}
    for t in port_field.tones:
        key = (t.label.path, t.label.pol_origin)
        if key in by_key:
            messages.append(f"{name}: duplicate tone {t.label}")
        by_key[key] = t

    ratios = []
    for key, freq, coeff in expected:
        tone = by_key.pop(key, None)
        if tone is None:
            messages.append(f"{name}: missing tone {key[1]}{key[0]}")
            continue
        if abs(tone.freq_offset - freq) > 1e-9 * max(1.0, abs(freq)):
            messages.append(
                f"{name}: tone {tone.label} at {tone.freq_offset} Hz, expected {freq} Hz"
            )
            continue
        actual = _tone_scalar(tone, analyzer)
        if abs(coeff) <= tol * scale:
            if abs(actual) > tol * scale:
                messages.append(
                    f"{name}: tone {tone.label} should vanish, has amplitude {abs(actual):.3e}"
                )
            continue
        ratios.append((tone.label, actual / coeff))
    for key in by_key:
        messages.append(f"{name}: unexpected tone {key[1]}{key[0]}")

    residual = None
    if ratios:
        for label, ratio in ratios:
            if abs(abs(ratio) - 1.0) > tol:
                messages.append(
                    f"{name}: tone {label} magnitude off by {abs(ratio) - 1.0:.3e}"
                )
        reference = ratios[0][1]
        for label, ratio in ratios[1:]:
            if abs(ratio - reference) > tol:
                messages.append(
                    f"{name}: tone {label} relative sign/phase mismatch "
                    f"(ratio {ratio / reference:.6f} to first tone)"
                )
        residual = cmath.phase(reference)
    return PortCheck(name=name, ok=not messages, residual_phase=residual, messages=messages)


def assert_canonical_form(result: PropagationResult, tol: float = 1e-9) -> CanonicalFormReport:
    """Verify the PBS-combined output against the canonical coefficients.

    Each port must hold the two expected tones with the printed relative
    signs, up to one global phase per port (reported as the residual). A
    broken element convention, e.g. a PBS reflection phase off by pi, shows
    up as a relative-sign mismatch on port A.
    """
    cfg = result.config
    if cfg.combiner != "PBS":
        raise ConfigError(f"canonical form is defined for combiner='PBS', got {cfg.combiner!r}")
    scale = cfg.kappa()
    check_a = _check_port(
        result.port_a, _expected_port(cfg, result.sign_used, "A"),
        cfg.analyzer_xi, "port A", scale, tol,
    )
    check_b = _check_port(
        result.port_b, _expected_port(cfg, result.sign_used, "B"),
        cfg.analyzer_theta, "port B", scale, tol,
    )
    return CanonicalFormReport(ok=check_a.ok and check_b.ok, port_a=check_a, port_b=check_b)
