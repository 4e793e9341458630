"""Deterministic synthetic datasets: helices, a toy protein chain, and an
isometrically embedded plane used as a ground-truth fixture."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import LabelSet, PointCloud
from .errors import DataError


@dataclass(frozen=True)
class HelixSpec:
    t_start: float = 0.0
    t_end: float = 10 * math.pi
    t_step: float = 0.05 * math.pi
    pitch: float = 0.1
    phase: float = 0.0
    radius: float = 1.0

    def __post_init__(self):
        for name in ("t_start", "t_end", "t_step", "pitch", "phase", "radius"):
            if not math.isfinite(getattr(self, name)):
                raise DataError(f"helix {name} must be finite")
        if self.t_step <= 0:
            raise DataError("helix t_step must be > 0")
        if self.t_end <= self.t_start:
            raise DataError("helix t_end must exceed t_start")

    @property
    def count(self) -> int:
        # the relative slack absorbs rounding in e.g. (10*pi) / (0.05*pi)
        span = (self.t_end - self.t_start) / self.t_step
        return int(math.floor(span * (1 + 1e-12))) + 1

    def parameters(self) -> np.ndarray:
        return self.t_start + np.arange(self.count) * self.t_step


def _helix_points(spec: HelixSpec) -> np.ndarray:
    t = spec.parameters()
    return np.column_stack([
        spec.radius * np.cos(t + spec.phase),
        spec.radius * np.sin(t + spec.phase),
        spec.pitch * t,
    ])


def gen_helix(spec: HelixSpec | None = None) -> PointCloud:
    """Sample ``(r cos(t + phase), r sin(t + phase), pitch * t)`` on a uniform grid of t."""
    return PointCloud(_helix_points(spec or HelixSpec()))


def gen_double_helix(spec: HelixSpec | None = None) -> tuple[PointCloud, LabelSet]:
    """Two strands, the second shifted by half a turn; strand 0 rows come first."""
    spec = spec or HelixSpec()
    other = HelixSpec(spec.t_start, spec.t_end, spec.t_step, spec.pitch,
                      spec.phase + math.pi, spec.radius)
    a = _helix_points(spec)
    b = _helix_points(other)
    labels = np.repeat([0, 1], [a.shape[0], b.shape[0]])
    return PointCloud(np.vstack([a, b])), LabelSet(labels)


def gen_toy_protein(helix_turns: float = 2.5, sheet_periods: int = 1,
                    samples_per_segment: int = 100, *, radius: float = 1.0,
                    pitch: float = 0.1, sheet_amplitude: float = 1.0,
                    sheet_length: float | None = None) -> PointCloud:
    """Helix, planar cosine sheet, helix, joined end to start.

    Each segment has ``samples_per_segment`` rows. The sheet runs along x at
    constant y with ``z = amplitude * cos(2 pi * periods * s)``; its length
    defaults to the axial extent of one helix. Consecutive segments share their
    junction point exactly.
    """
    if helix_turns <= 0 or sheet_periods < 1 or samples_per_segment < 1:
        raise DataError("toy protein counts must be >= 1")
    m = int(samples_per_segment)
    t_end = 2 * math.pi * helix_turns
    t = np.linspace(0.0, t_end, m) if m > 1 else np.zeros(1)
    helix = np.column_stack([radius * np.cos(t), radius * np.sin(t), pitch * t])

    length = pitch * t_end if sheet_length is None else float(sheet_length)
    s = np.linspace(0.0, 1.0, m) if m > 1 else np.zeros(1)
    sheet = np.column_stack([
        length * s,
        np.zeros(m),
        sheet_amplitude * np.cos(2 * math.pi * sheet_periods * s),
    ])

    seg_a = helix
    seg_s = sheet - sheet[0] + seg_a[-1]
    seg_b = helix - helix[0] + seg_s[-1]
    return PointCloud(np.vstack([seg_a, seg_s, seg_b]))


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def gen_embedded_plane(n: int = 200, ambient_dim: int = 5,
                       seed: int = 0) -> tuple[PointCloud, PointCloud]:
    """Uniform points in the unit square, isometrically embedded in ``ambient_dim``.

    Returns ``(high, truth)`` where ``truth`` holds the original 2-D coordinates.
    """
    if ambient_dim < 2 or n < 3:
        raise DataError("embedded plane needs ambient_dim >= 2 and n >= 3")
    rng = np.random.default_rng(seed)
    truth = rng.uniform(0.0, 1.0, size=(n, 2))
    padded = np.zeros((n, ambient_dim))
    padded[:, :2] = truth
    q = random_orthogonal(ambient_dim, rng)
    return PointCloud(padded @ q.T), PointCloud(truth)
