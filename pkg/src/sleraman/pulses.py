"""Field models: impulsive actinic pulse, CW Raman pump, Gaussian probe.

Fourier convention throughout: ``E(w) = int dt exp(i w t) E(t)``.  Probe
spectra are stored delay-free; delay phases are applied by the signal code.
"""

from dataclasses import dataclass

import numpy as np

from .units import cm_to_rad, fs_to_s

SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class PulseSet:
    """Pulse parameters in internal units (s, rad/s).

    ``probe_center_offset`` is ``w_p - w_1``.  ``shift_convention`` picks the
    reported axis: ``"stokes"`` maps ``w - w_1 = -shift`` so lines appear at
    ``+w_ca``; ``"mirror"`` flips that.
    """

    probe_sigma: float = fs_to_s(20.0)
    probe_center_offset: float = cm_to_rad(-1000.0)
    pump_frequency: float = 0.0
    actinic_amplitude: float = 1.0
    pump_amplitude: float = 1.0
    probe_amplitude: float = 1.0
    shift_convention: str = "stokes"

    def __post_init__(self):
        if not self.probe_sigma > 0:
            raise ValueError(f"probe duration must be positive, got {self.probe_sigma!r}")
        for name in ("actinic_amplitude", "pump_amplitude", "probe_amplitude"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.shift_convention not in ("stokes", "mirror"):
            raise ValueError(f"unknown shift convention {self.shift_convention!r}")

    def detuning(self, shift):
        """Signal frequency relative to the pump, ``w - w_1``, for a Raman shift (rad/s)."""
        shift = np.asarray(shift, dtype=float)
        return -shift if self.shift_convention == "stokes" else shift.copy()


def probe_envelope_freq(p, omega_rel):
    """Probe spectrum ``sigma sqrt(2 pi) exp(-sigma^2 (w_rel - (w_p - w_1))^2 / 2)``."""
    x = np.asarray(omega_rel, dtype=float) - p.probe_center_offset
    return p.probe_amplitude * p.probe_sigma * SQRT_2PI * np.exp(-0.5 * (p.probe_sigma * x) ** 2)


def probe_envelope_time(p, t):
    """Delay-free probe field in the frame rotating at ``w_1``.

    Its transform under the artifact convention is :func:`probe_envelope_freq`.
    """
    t = np.asarray(t, dtype=float)
    return (p.probe_amplitude * np.exp(-0.5 * (t / p.probe_sigma) ** 2)
            * np.exp(-1j * p.probe_center_offset * t))


def gaussian_spectrum(center, sigma, omega):
    """Spectrum of ``exp(-t^2 / 2 sigma^2 - i center t)``."""
    x = np.asarray(omega, dtype=float) - center
    return sigma * SQRT_2PI * np.exp(-0.5 * (sigma * x) ** 2)
