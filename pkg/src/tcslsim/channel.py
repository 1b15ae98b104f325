"""Omnidirectional channel realization generator.

Multipath is organized as time clusters (exponential inter/intra-cluster
delays) carrying subpath components, with departure and arrival directions
grouped into spatial lobes shared across the realization.  Lobe m collects
the mth subpath of every cluster: the realization owns max(M_n) departure
and arrival lobe centers, and the component at position m inside cluster n
scatters about center m at both link ends.  A narrow beam aligned with one
lobe therefore still receives energy spanning the whole delay profile,
which is what gives directional delay spreads the same order of magnitude
as omnidirectional ones.

Draw order (normative; changing it changes every seeded output):

1.  cluster count N: 1 uniform on {n_clusters_min, ..., n_clusters_max}
2.  inter-cluster gaps: N-1 exponentials, mean mu_s_ns
3.  subpath counts M_n: N uniforms
4.  intra-cluster delays: per cluster in index order, M_n exponentials
    with mean subpath_delay_mean_ns (mu_s_ns/4 when unset), then sorted
    and shifted so the first subpath rides exactly on the cluster delay
5.  link delay scale: 1 normal when delay_scale_sigma_log10 > 0 (no
    draw otherwise); every cluster and intra-cluster delay is multiplied
    by 10 ** (delay_scale_sigma_log10 * z), so the dispersion of a link
    varies log-normally around the configured scale
6.  per-cluster shadowing: N normals, sigma cluster_shadow_sigma_db
7.  departure lobe centers: max(M_n) lobes, azimuth uniform then zenith
    normal per lobe
8.  arrival lobe centers: same layout
9.  per-component angle offsets: 4 normals (aod, zod, aoa, zoa)
10. per-component phases: 1 uniform each, scaled to [0, 2*pi)
11. path-loss shadow fading: 1 normal

All angle conventions: azimuth in [0, 360) wrapped modulo 360, zenith in
[0, 180] clamped, elevation = 90 - zenith.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields

import numpy as np

SPEED_OF_LIGHT_M_S = 3.0e8

POWER_SUM_TOL = 1e-9


class Scenario(enum.Enum):
    UMI = "UMi"
    UMA = "UMa"
    RMA = "RMa"
    INF = "InF"
    INH = "InH"

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        key = str(text).strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(
            f"unknown scenario {text!r}; expected one of "
            + ", ".join(m.value for m in cls)
        )


class Condition(enum.Enum):
    LOS = "LOS"
    NLOS = "NLOS"

    @classmethod
    def parse(cls, text: str) -> "Condition":
        key = str(text).strip().upper()
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown condition {text!r}; expected LOS or NLOS")


# Mean (ns) of the exponential inter-cluster delay distribution per
# calibrated (band, condition) pair; intra-cluster mean is a quarter of it.
MU_S_PRESETS_NS = {
    (16.95, Condition.LOS): 30.0,
    (16.95, Condition.NLOS): 32.0,
    (6.75, Condition.LOS): 18.0,
    (6.75, Condition.NLOS): 22.0,
}

# (path loss exponent, shadow fading sigma dB)
PATH_LOSS_DEFAULTS = {
    Condition.LOS: (2.0, 4.0),
    Condition.NLOS: (3.0, 8.0),
}

PRESET_FREQUENCIES_GHZ = (6.75, 16.95)
WIDEBAND_RANGE_GHZ = (28.0, 142.0)


def _frequency_supported(frequency_ghz: float) -> bool:
    if frequency_ghz in PRESET_FREQUENCIES_GHZ:
        return True
    lo, hi = WIDEBAND_RANGE_GHZ
    return lo <= frequency_ghz <= hi


@dataclass(frozen=True)
class SimulationConfig:
    """Immutable generation parameters; presets fill the optional fields."""

    frequency_ghz: float
    condition: Condition = Condition.LOS
    scenario: Scenario = Scenario.UMI
    tr_distance_m: float = 100.0
    n_clusters_max: int = 4
    n_clusters_min: int = 1
    mu_s_ns: float | None = None
    path_loss_exponent: float | None = None
    shadow_sigma_db: float | None = None
    seed: int = 1
    n_realizations: int = 1
    subpaths_per_cluster_max: int = 5
    subpath_delay_mean_ns: float | None = None
    delay_scale_sigma_log10: float = 0.0
    cluster_decay_ns: float = 25.0
    subpath_decay_ns: float = 8.0
    cluster_shadow_sigma_db: float = 3.0
    lobe_zenith_mean_deg: float = 90.0
    lobe_zenith_sigma_deg: float = 10.0
    subpath_offset_sigma_deg: float = 5.0

    def __post_init__(self):
        if isinstance(self.condition, str):
            object.__setattr__(self, "condition", Condition.parse(self.condition))
        if isinstance(self.scenario, str):
            object.__setattr__(self, "scenario", Scenario.parse(self.scenario))
        if not isinstance(self.condition, Condition):
            raise ValueError(f"condition must be a Condition, got {self.condition!r}")
        if not isinstance(self.scenario, Scenario):
            raise ValueError(f"scenario must be a Scenario, got {self.scenario!r}")

        f = float(self.frequency_ghz)
        object.__setattr__(self, "frequency_ghz", f)
        if not (math.isfinite(f) and f > 0):
            raise ValueError("frequency_ghz must be a positive real")
        if not _frequency_supported(f):
            raise ValueError(
                f"frequency {f} GHz outside the supported set: presets "
                f"{PRESET_FREQUENCIES_GHZ} or the {WIDEBAND_RANGE_GHZ} GHz range"
            )

        if self.mu_s_ns is None:
            preset = MU_S_PRESETS_NS.get((f, self.condition))
            if preset is None:
                raise ValueError(
                    f"no mu_s_ns preset for {f} GHz {self.condition.value}; "
                    "set mu_s_ns explicitly"
                )
            object.__setattr__(self, "mu_s_ns", preset)
        if not self.mu_s_ns > 0:
            raise ValueError("mu_s_ns must be positive")

        ple_default, sigma_default = PATH_LOSS_DEFAULTS[self.condition]
        if self.path_loss_exponent is None:
            object.__setattr__(self, "path_loss_exponent", ple_default)
        if self.shadow_sigma_db is None:
            object.__setattr__(self, "shadow_sigma_db", sigma_default)
        if not self.shadow_sigma_db >= 0:
            raise ValueError("shadow_sigma_db must be non-negative")

        if not self.tr_distance_m >= 1.0:
            raise ValueError("tr_distance_m must be at least 1 m")
        for name in ("n_clusters_max", "n_clusters_min", "subpaths_per_cluster_max"):
            value = getattr(self, name)
            if not (isinstance(value, int) and value >= 1):
                raise ValueError(f"{name} must be an integer >= 1")
        if self.n_clusters_min > self.n_clusters_max:
            raise ValueError("n_clusters_min must not exceed n_clusters_max")
        for name in ("cluster_decay_ns", "subpath_decay_ns"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.subpath_delay_mean_ns is not None and not self.subpath_delay_mean_ns > 0:
            raise ValueError("subpath_delay_mean_ns must be positive when set")
        for name in (
            "cluster_shadow_sigma_db",
            "delay_scale_sigma_log10",
            "lobe_zenith_sigma_deg",
            "subpath_offset_sigma_deg",
        ):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")
        if not (0.0 <= self.lobe_zenith_mean_deg <= 180.0):
            raise ValueError("lobe_zenith_mean_deg must lie in [0, 180]")
        seed = self.seed
        if not (isinstance(seed, int) and 0 <= seed <= 0xFFFFFFFF):
            raise ValueError("seed must be an integer in [0, 2^32)")
        if not (isinstance(self.n_realizations, int) and self.n_realizations >= 0):
            raise ValueError("n_realizations must be a non-negative integer")

    def replace(self, **changes) -> "SimulationConfig":
        from dataclasses import replace as _replace

        return _replace(self, **changes)

    def as_dict(self) -> dict:
        out = {}
        for f_ in fields(self):
            value = getattr(self, f_.name)
            if isinstance(value, enum.Enum):
                value = value.value
            out[f_.name] = value
        return out


@dataclass(frozen=True)
class ClusterSkeleton:
    """Delay structure: cluster excess delays plus per-subpath offsets."""

    cluster_delays_ns: np.ndarray  # (N,)
    subpath_counts: np.ndarray  # (N,) int
    intra_delays_ns: np.ndarray  # (C,) flat, cluster-major
    cluster_of: np.ndarray  # (C,) int, cluster index per component

    @property
    def n_clusters(self) -> int:
        return int(self.cluster_delays_ns.size)

    @property
    def n_components(self) -> int:
        return int(self.intra_delays_ns.size)

    @property
    def component_delays_ns(self) -> np.ndarray:
        return self.cluster_delays_ns[self.cluster_of] + self.intra_delays_ns


@dataclass(frozen=True)
class MultipathComponent:
    amplitude: float
    phase_rad: float
    delay_ns: float
    aod_deg: float
    zod_deg: float
    aoa_deg: float
    zoa_deg: float
    cluster_index: int
    lobe_index: int


@dataclass(frozen=True)
class ChannelRealization:
    """One omnidirectional channel drop, array-backed for vector math."""

    delays_ns: np.ndarray
    powers: np.ndarray  # linear fractions, sum to 1
    phases_rad: np.ndarray
    aod_deg: np.ndarray
    zod_deg: np.ndarray
    aoa_deg: np.ndarray
    zoa_deg: np.ndarray
    cluster_indices: np.ndarray
    lobe_indices: np.ndarray
    n_time_clusters: int
    lobes_per_cluster: tuple
    cluster_delays_ns: np.ndarray
    path_loss_db: float
    config: SimulationConfig
    seed: int

    def __post_init__(self):
        total = float(self.powers.sum())
        if abs(total - 1.0) > POWER_SUM_TOL:
            raise ValueError(f"component powers sum to {total}, expected 1")
        if self.n_time_clusters < 1:
            raise ValueError("a realization needs at least one time cluster")
        if self.delays_ns.min(initial=0.0) < 0.0:
            raise ValueError("negative component delay")
        if self.cluster_indices.max(initial=0) >= self.n_time_clusters:
            raise ValueError("component cluster index out of range")
        if not (self.powers > 0.0).all():
            raise ValueError("component powers must be strictly positive")

    @property
    def n_components(self) -> int:
        return int(self.delays_ns.size)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.sqrt(self.powers)

    @property
    def components(self) -> list:
        amps = self.amplitudes
        return [
            MultipathComponent(
                amplitude=float(amps[i]),
                phase_rad=float(self.phases_rad[i]),
                delay_ns=float(self.delays_ns[i]),
                aod_deg=float(self.aod_deg[i]),
                zod_deg=float(self.zod_deg[i]),
                aoa_deg=float(self.aoa_deg[i]),
                zoa_deg=float(self.zoa_deg[i]),
                cluster_index=int(self.cluster_indices[i]),
                lobe_index=int(self.lobe_indices[i]),
            )
            for i in range(self.n_components)
        ]


def _uniform_count(rng, upper: int) -> int:
    """Uniform integer on {1, ..., upper} from one base uniform."""
    return min(1 + int(rng.next_uniform53() * upper), upper)


def generate_time_clusters(cfg: SimulationConfig, rng) -> ClusterSkeleton:
    """Draw the cluster/subpath delay skeleton (steps 1-5 of the draw order)."""
    span = cfg.n_clusters_max - cfg.n_clusters_min + 1
    n_clusters = cfg.n_clusters_min + _uniform_count(rng, span) - 1

    delays = np.zeros(n_clusters)
    if n_clusters > 1:
        gaps = rng.exponentials(n_clusters - 1, cfg.mu_s_ns)
        delays[1:] = np.cumsum(gaps)

    counts = np.array(
        [_uniform_count(rng, cfg.subpaths_per_cluster_max) for _ in range(n_clusters)],
        dtype=np.int64,
    )

    intra_mean = (
        cfg.subpath_delay_mean_ns
        if cfg.subpath_delay_mean_ns is not None
        else cfg.mu_s_ns / 4.0
    )
    intra_blocks = []
    for count in counts:
        block = np.sort(rng.exponentials(int(count), intra_mean))
        intra_blocks.append(block - block[0])  # first subpath rides the cluster delay
    intra = np.concatenate(intra_blocks)

    if cfg.delay_scale_sigma_log10 > 0.0:
        scale = 10.0 ** rng.sample_normal(0.0, cfg.delay_scale_sigma_log10)
        delays = delays * scale
        intra = intra * scale

    cluster_of = np.repeat(np.arange(n_clusters, dtype=np.int64), counts)
    return ClusterSkeleton(
        cluster_delays_ns=delays,
        subpath_counts=counts,
        intra_delays_ns=intra,
        cluster_of=cluster_of,
    )


def assign_cluster_powers(skeleton: ClusterSkeleton, cfg: SimulationConfig, rng):
    """Per-component power fractions (step 6 consumes the shadowing normals).

    Cluster weights decay exponentially in excess delay with per-cluster
    lognormal shadowing; subpath weights decay exponentially in the
    intra-cluster delay.  Both levels renormalize, so the fractions sum
    to 1 for every skeleton.
    """
    n = skeleton.n_clusters
    shadow_db = np.array(
        [rng.sample_normal(0.0, cfg.cluster_shadow_sigma_db) for _ in range(n)]
    )
    cluster_w = np.exp(-skeleton.cluster_delays_ns / cfg.cluster_decay_ns)
    cluster_w = cluster_w * 10.0 ** (shadow_db / 10.0)
    cluster_frac = cluster_w / cluster_w.sum()

    sub_w = np.exp(-skeleton.intra_delays_ns / cfg.subpath_decay_ns)
    sums = np.zeros(n)
    np.add.at(sums, skeleton.cluster_of, sub_w)
    fractions = cluster_frac[skeleton.cluster_of] * sub_w / sums[skeleton.cluster_of]
    return fractions / fractions.sum()


@dataclass(frozen=True)
class ComponentAngles:
    aod_deg: np.ndarray
    zod_deg: np.ndarray
    aoa_deg: np.ndarray
    zoa_deg: np.ndarray
    n_departure_lobes: int
    n_arrival_lobes: int


def _draw_lobe_centers(cfg: SimulationConfig, rng, n_lobes: int):
    az = np.empty(n_lobes)
    zen = np.empty(n_lobes)
    for i in range(n_lobes):
        az[i] = 360.0 * rng.next_uniform53()
        zen[i] = min(
            max(rng.sample_normal(cfg.lobe_zenith_mean_deg, cfg.lobe_zenith_sigma_deg), 0.0),
            180.0,
        )
    return az, zen


def generate_spatial_lobes(
    skeleton: ClusterSkeleton, cfg: SimulationConfig, rng
) -> ComponentAngles:
    """Assign departure/arrival directions (steps 7-9 of the draw order).

    The realization owns max(M_n) lobe centers at each link end; the mth
    subpath of every cluster scatters about center m with normal angular
    offsets, so a single lobe carries one tap from each time cluster.
    """
    n_lobes = int(max(skeleton.subpath_counts))
    dep_az, dep_zen = _draw_lobe_centers(cfg, rng, n_lobes)
    arr_az, arr_zen = _draw_lobe_centers(cfg, rng, n_lobes)

    lobe_of = np.concatenate(
        [np.arange(c, dtype=np.int64) for c in skeleton.subpath_counts]
    )
    n_comp = skeleton.n_components
    sigma = cfg.subpath_offset_sigma_deg
    aod = np.empty(n_comp)
    zod = np.empty(n_comp)
    aoa = np.empty(n_comp)
    zoa = np.empty(n_comp)
    for i in range(n_comp):
        m = lobe_of[i]
        aod[i] = (dep_az[m] + rng.sample_normal(0.0, sigma)) % 360.0
        zod[i] = min(max(dep_zen[m] + rng.sample_normal(0.0, sigma), 0.0), 180.0)
        aoa[i] = (arr_az[m] + rng.sample_normal(0.0, sigma)) % 360.0
        zoa[i] = min(max(arr_zen[m] + rng.sample_normal(0.0, sigma), 0.0), 180.0)
    return ComponentAngles(
        aod_deg=aod,
        zod_deg=zod,
        aoa_deg=aoa,
        zoa_deg=zoa,
        n_departure_lobes=n_lobes,
        n_arrival_lobes=n_lobes,
    )


def free_space_path_loss_1m_db(frequency_ghz: float) -> float:
    """Free-space loss at the 1 m close-in reference distance."""
    f_hz = frequency_ghz * 1e9
    return 20.0 * math.log10(4.0 * math.pi * f_hz / SPEED_OF_LIGHT_M_S)


def path_loss_ci(
    frequency_ghz: float,
    distance_m: float,
    path_loss_exponent: float,
    shadow_sigma_db: float,
    rng,
) -> float:
    """Close-in reference path loss: FSPL(1 m) + 10 n log10(d) + shadowing."""
    if distance_m < 1.0:
        raise ValueError("distance_m must be at least the 1 m reference distance")
    shadow = rng.sample_normal(0.0, shadow_sigma_db)
    return (
        free_space_path_loss_1m_db(frequency_ghz)
        + 10.0 * path_loss_exponent * math.log10(distance_m)
        + shadow
    )


_TAU = 2.0 * math.pi


def generate_realization(cfg: SimulationConfig, rng) -> ChannelRealization:
    """Compose the full draw order (steps 1-11) into one realization."""
    skeleton = generate_time_clusters(cfg, rng)
    powers = assign_cluster_powers(skeleton, cfg, rng)
    angles = generate_spatial_lobes(skeleton, cfg, rng)

    n_comp = skeleton.n_components
    phases = _TAU * rng.uniforms(n_comp)

    path_loss = path_loss_ci(
        cfg.frequency_ghz,
        cfg.tr_distance_m,
        cfg.path_loss_exponent,
        cfg.shadow_sigma_db,
        rng,
    )

    lobe_indices = np.concatenate(
        [np.arange(c, dtype=np.int64) for c in skeleton.subpath_counts]
    )
    return ChannelRealization(
        delays_ns=skeleton.component_delays_ns,
        powers=powers,
        phases_rad=phases,
        aod_deg=angles.aod_deg,
        zod_deg=angles.zod_deg,
        aoa_deg=angles.aoa_deg,
        zoa_deg=angles.zoa_deg,
        cluster_indices=skeleton.cluster_of,
        lobe_indices=lobe_indices,
        n_time_clusters=skeleton.n_clusters,
        lobes_per_cluster=tuple(int(c) for c in skeleton.subpath_counts),
        cluster_delays_ns=skeleton.cluster_delays_ns,
        path_loss_db=path_loss,
        config=cfg,
        seed=int(getattr(rng, "seed", 0)),
    )
