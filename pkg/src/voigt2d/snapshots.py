"""Binary vorticity snapshots.

Layout (fixed little-endian for cross-platform byte-exact round-trips):
magic ``VFLD`` (4 bytes), format version u32, grid size M u32, time f64,
alpha f64, then M*M real-space vorticity values as f64, row-major with
the x index fastest.  Reading then writing a file reproduces it bit for
bit; a version mismatch is a hard error.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .grid import GridSpec
from .spectral import SpectralField, forward_transform, inverse_transform

MAGIC = b"VFLD"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIdd")


class SnapshotError(ValueError):
    """Unreadable or malformed snapshot file."""


@dataclass(frozen=True)
class Snapshot:
    """One stored vorticity field with its simulation time and alpha."""

    time: float
    alpha: float
    values: np.ndarray  # real grid values, indexed [i1, i2]

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise SnapshotError(f"snapshot values must be square, got {v.shape}")
        if v is not self.values or v.flags.writeable:
            if v is self.values:
                v = v.copy()
            v.setflags(write=False)
            object.__setattr__(self, "values", v)

    @property
    def grid(self) -> GridSpec:
        return GridSpec(self.values.shape[0])

    def field(self) -> SpectralField:
        return forward_transform(self.values, self.grid)


def snapshot_of(omega: SpectralField, time: float, alpha: float) -> Snapshot:
    return Snapshot(time=float(time), alpha=float(alpha), values=inverse_transform(omega))


def write_snapshot(path: str, snap: Snapshot) -> None:
    m = snap.values.shape[0]
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, m, snap.time, snap.alpha)
    # stored x-fastest: transpose the [i1, i2] layout before flattening
    payload = np.ascontiguousarray(snap.values.T, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_snapshot(path: str) -> Snapshot:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot {path!r}: {exc}") from exc
    if len(blob) < _HEADER.size:
        raise SnapshotError(f"truncated snapshot {path!r}: no complete header")
    magic, version, m, time, alpha = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise SnapshotError(f"bad magic {magic!r} in {path!r} (want {MAGIC!r})")
    if version != FORMAT_VERSION:
        raise SnapshotError(
            f"unsupported snapshot version {version} in {path!r} "
            f"(supported: {FORMAT_VERSION})"
        )
    if m < 8 or m % 2:
        raise SnapshotError(f"bad grid size {m} in {path!r}")
    expected = _HEADER.size + 8 * m * m
    if len(blob) != expected:
        raise SnapshotError(
            f"truncated snapshot {path!r}: {len(blob)} bytes, want {expected}"
        )
    flat = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
    values = flat.reshape(m, m).T.copy()
    return Snapshot(time=time, alpha=alpha, values=values)
