"""Parametric element pattern synthesis (sector element and horn presets).

The element model combines two quadratic roll-offs, one per principal
plane, each clamped at its own floor, and clamps the combined loss at
a_max_db.  Angles follow the zenith/azimuth convention internally:
zenith in [0, 180] measured from straight up, azimuth in [-180, 180],
with boresight at zenith 90, azimuth 0.  The stored pattern uses the
elevation convention, elevation = 90 - zenith.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pattern import AntennaPattern, Polarization, make_grids


@dataclass(frozen=True)
class ThreeGppParams:
    theta_3db_deg: float = 65.0
    phi_3db_deg: float = 65.0
    sla_v_db: float = 30.0
    a_max_db: float = 30.0
    element_peak_gain_dbi: float = 8.0

    def __post_init__(self):
        for name in ("theta_3db_deg", "phi_3db_deg", "sla_v_db", "a_max_db"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


def vertical_attenuation_db(zenith_deg, params: ThreeGppParams = ThreeGppParams()):
    """Vertical-plane loss: -min(12*((zenith-90)/theta_3db)^2, sla_v), in dB (<= 0)."""
    z = np.asarray(zenith_deg, dtype=np.float64)
    return -np.minimum(12.0 * ((z - 90.0) / params.theta_3db_deg) ** 2, params.sla_v_db)


def horizontal_attenuation_db(azimuth_deg, params: ThreeGppParams = ThreeGppParams()):
    """Horizontal-plane loss: -min(12*(azimuth/phi_3db)^2, a_max), in dB (<= 0).

    The azimuth argument is wrapped into [-180, 180) first.
    """
    a = np.mod(np.asarray(azimuth_deg, dtype=np.float64) + 180.0, 360.0) - 180.0
    return -np.minimum(12.0 * (a / params.phi_3db_deg) ** 2, params.a_max_db)


def element_attenuation_db(zenith_deg, azimuth_deg, params: ThreeGppParams = ThreeGppParams()):
    """Combined element loss: -min(-(A_v + A_h), a_max), in dB (<= 0)."""
    a_v = vertical_attenuation_db(zenith_deg, params)
    a_h = horizontal_attenuation_db(azimuth_deg, params)
    return -np.minimum(-(a_v + a_h), params.a_max_db)


def synthesize_3gpp(
    params: ThreeGppParams = ThreeGppParams(),
    grid_step_deg: float = 1.0,
    *,
    frequency_ghz: float | None = None,
    polarization: Polarization = Polarization.VERTICAL,
    source: str = "3gpp-element",
) -> AntennaPattern:
    """Evaluate the element model on a full-sphere grid.

    Absolute gain is element_peak_gain_dbi plus the (non-positive)
    combined attenuation, so the peak sits exactly at boresight.
    """
    el, az = make_grids(grid_step_deg)
    zen = 90.0 - el
    att = element_attenuation_db(zen[:, None], az[None, :], params)
    return AntennaPattern.from_absolute_gain(
        el,
        az,
        params.element_peak_gain_dbi + att,
        polarization=polarization,
        frequency_ghz=frequency_ghz,
        source=source,
    )


def horn_pattern(
    peak_gain_dbi: float,
    hpbw_deg: float,
    grid_step_deg: float = 1.0,
    *,
    frequency_ghz: float | None = None,
) -> AntennaPattern:
    """Symmetric horn surrogate: the element model with equal 3 dB widths."""
    params = ThreeGppParams(
        theta_3db_deg=hpbw_deg,
        phi_3db_deg=hpbw_deg,
        element_peak_gain_dbi=peak_gain_dbi,
    )
    return synthesize_3gpp(
        params,
        grid_step_deg,
        frequency_ghz=frequency_ghz,
        source=f"horn-{peak_gain_dbi:g}dBi-{hpbw_deg:g}deg",
    )
