"""Field serialization (GTF1 binary), CSV slice fields and WAV ingestion.

GTF1 layout, all little-endian::

    b"GTF1"  u8 kind  u8 rank
    rank x (u64 count, count x f64 axis points)
    prod(counts) x (f64 re, f64 im)     row-major
    u32 CRC32 of everything after the magic

Kind tags: 0 slice, 1 V, 2 Vdag, 3 A, 4 B, 5 G, 6 Gdag.  A G/Gdag file
whose rank is one less than the full (h, k, t, w) rank holds the t = h
diagonal.
"""

from __future__ import annotations

import csv
import struct
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .grids import Grid1D, ProductGrid
from .groups import GroupDescriptor
from .lca import SampledWindow
from .transforms import GaborField, OtimesGaborField, SliceField

MAGIC = b"GTF1"
KIND_TAGS = {"slice": 0, "V": 1, "Vdag": 2, "A": 3, "B": 4, "G": 5, "Gdag": 6}
TAG_KINDS = {v: k for k, v in KIND_TAGS.items()}


class FieldFormatError(ValueError):
    """Malformed or corrupted GTF1 data."""


class ParseError(ValueError):
    """Malformed CSV input; the message carries the line number."""


class LatticeIncompleteError(ValueError):
    """A CSV field does not cover every (h, k) grid node."""


@dataclass(frozen=True, eq=False)
class FieldRecord:
    kind: str
    axes: tuple[np.ndarray, ...]
    values: np.ndarray

    @property
    def diagonal(self) -> bool:
        if self.kind not in ("G", "Gdag"):
            return False
        # full rank is 2 + 2 dK (odd ranks are diagonal)
        return len(self.axes) % 2 == 1


def _field_axes(field) -> tuple[str, list[np.ndarray]]:
    if isinstance(field, SliceField):
        return "slice", [field.h_grid.points] + [a.points for a in field.k_grid.axes]
    k = [a.points for a in field.k_grid.axes]
    w = [a.points for a in field.w_grid.axes]
    h = field.h_grid.points
    if isinstance(field, OtimesGaborField) and not field.diagonal:
        return field.kind, [h] + k + [h] + w
    return field.kind, [h] + k + w


def encode_field(field) -> bytes:
    kind, axes = _field_axes(field)
    values = np.ascontiguousarray(field.values, dtype=np.complex128)
    if values.shape != tuple(len(a) for a in axes):
        raise FieldFormatError("values do not match axes")
    parts = [struct.pack("<BB", KIND_TAGS[kind], len(axes))]
    for a in axes:
        parts.append(struct.pack("<Q", len(a)))
        parts.append(np.asarray(a, dtype="<f8").tobytes())
    parts.append(values.view("<f8").tobytes())
    payload = b"".join(parts)
    return MAGIC + payload + struct.pack("<I", zlib.crc32(payload))


def decode_field(data: bytes) -> FieldRecord:
    if len(data) < 10 or data[:4] != MAGIC:
        raise FieldFormatError("not a GTF1 file (bad magic)")
    payload, (crc,) = data[4:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(payload) != crc:
        raise FieldFormatError("CRC32 mismatch")
    tag, rank = struct.unpack_from("<BB", payload, 0)
    if tag not in TAG_KINDS:
        raise FieldFormatError(f"unknown kind tag {tag}")
    pos = 2
    axes = []
    for _ in range(rank):
        if pos + 8 > len(payload):
            raise FieldFormatError("truncated axis header")
        (n,) = struct.unpack_from("<Q", payload, pos)
        pos += 8
        end = pos + 8 * n
        if end > len(payload):
            raise FieldFormatError("truncated axis points")
        axes.append(np.frombuffer(payload, dtype="<f8", count=n, offset=pos).astype(float))
        pos = end
    shape = tuple(len(a) for a in axes)
    size = int(np.prod(shape))
    if len(payload) - pos != 16 * size:
        raise FieldFormatError("value block length does not match axes")
    vals = np.frombuffer(payload, dtype="<f8", offset=pos).astype(float).view(np.complex128)
    return FieldRecord(TAG_KINDS[tag], tuple(axes), vals.reshape(shape))


def write_field(path, field) -> None:
    Path(path).write_bytes(encode_field(field))


def read_field(path) -> FieldRecord:
    return decode_field(Path(path).read_bytes())


def _match_axis(points: np.ndarray, grid: Grid1D, label: str) -> None:
    if len(points) != grid.count or not np.array_equal(points, grid.points):
        raise FieldFormatError(f"{label} axis of the file does not match the configured grid")


def record_to_field(rec: FieldRecord, group: GroupDescriptor, h_grid: Grid1D,
                    k_grid: ProductGrid, w_grid: ProductGrid | None = None):
    """Rebuild a typed field from a record, checking its axes against the grids."""
    d = k_grid.ndim
    _match_axis(rec.axes[0], h_grid, "H")
    for a, ax in enumerate(k_grid.axes):
        _match_axis(rec.axes[1 + a], ax, "K")
    if rec.kind == "slice":
        if len(rec.axes) != 1 + d:
            raise FieldFormatError("slice field rank does not match the K-grid")
        return SliceField(rec.values, h_grid, k_grid, group)
    if w_grid is None:
        raise FieldFormatError("a frequency grid is needed for transform fields")
    w_axes = rec.axes[-d:]
    for a, ax in enumerate(w_grid.axes):
        _match_axis(w_axes[a], ax, "K^")
    if rec.kind in ("G", "Gdag"):
        if rec.diagonal:
            return OtimesGaborField(rec.values, h_grid, k_grid, w_grid, rec.kind, group, True)
        _match_axis(rec.axes[1 + d], h_grid, "T")
        return OtimesGaborField(rec.values, h_grid, k_grid, w_grid, rec.kind, group, False)
    return GaborField(rec.values, h_grid, k_grid, w_grid, rec.kind, group)


# --- CSV -------------------------------------------------------------------------

def _locate(value: float, points: np.ndarray) -> int | None:
    i = int(np.argmin(np.abs(points - value)))
    scale = max(1.0, abs(points[i]))
    return i if abs(points[i] - value) <= 1e-9 * scale else None


def _k_header(d: int, prefix: str = "k") -> list[str]:
    return [prefix] if d == 1 else [f"{prefix}{a + 1}" for a in range(d)]


def _read_lattice(path, header: list[str], axes: list[np.ndarray]) -> np.ndarray:
    """Fill a complex lattice from CSV rows (coords..., re, im)."""
    shape = tuple(len(a) for a in axes)
    vals = np.zeros(shape, dtype=complex)
    seen = np.zeros(shape, dtype=bool)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise ParseError("line 1: empty file") from None
        if [c.strip() for c in first] != header:
            raise ParseError(f"line 1: expected header {','.join(header)!r}")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(f"line {line}: expected {len(header)} columns, got {len(row)}")
            try:
                nums = [float(c) for c in row]
            except ValueError:
                raise ParseError(f"line {line}: non-numeric entry") from None
            if not all(np.isfinite(nums)):
                raise ParseError(f"line {line}: non-finite entry")
            idx = []
            for a, (x, pts) in enumerate(zip(nums[:-2], axes)):
                i = _locate(x, pts)
                if i is None:
                    raise ParseError(f"line {line}: coordinate {header[a]}={x!r} is not a grid node")
                idx.append(i)
            idx = tuple(idx)
            if seen[idx]:
                raise ParseError(f"line {line}: duplicate grid node")
            seen[idx] = True
            vals[idx] = complex(nums[-2], nums[-1])
    missing = int(seen.size - np.count_nonzero(seen))
    if missing:
        raise LatticeIncompleteError(f"{missing} of {seen.size} lattice points missing")
    return vals


def load_slice_csv(path, group: GroupDescriptor, h_grid: Grid1D, k_grid: ProductGrid) -> SliceField:
    """Read rows (h, k..., re, im) whose coordinates are grid nodes."""
    header = ["h"] + _k_header(k_grid.ndim) + ["re", "im"]
    axes = [h_grid.points] + [a.points for a in k_grid.axes]
    return SliceField(_read_lattice(path, header, axes), h_grid, k_grid, group)


def load_window_csv(path, k_grid: ProductGrid) -> SampledWindow:
    """Read a window from rows (k..., re, im); it is interpolated off-grid."""
    header = _k_header(k_grid.ndim) + ["re", "im"]
    vals = _read_lattice(path, header, [a.points for a in k_grid.axes])
    return SampledWindow(vals, k_grid)


def write_slice_csv(path, field: SliceField) -> None:
    header = ["h"] + _k_header(field.k_grid.ndim) + ["re", "im"]
    nodes = field.k_grid.nodes()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, h in enumerate(field.h_grid.points):
            row_vals = field.values[i].ravel()
            for k, v in zip(nodes, row_vals):
                w.writerow([repr(float(h))] + [repr(float(x)) for x in k]
                           + [repr(float(v.real)), repr(float(v.imag))])


def write_magnitude_csv(path, field, h_index: int) -> None:
    """|F| at one H-node as rows (k..., w..., magnitude); diagonal t = h for G kinds."""
    vals = field.diagonal_values()[h_index] if isinstance(field, OtimesGaborField) \
        else field.values[h_index]
    d = field.k_grid.ndim
    kn, wn = field.k_grid.nodes(), field.w_grid.nodes()
    header = _k_header(d) + _k_header(d, "w") + ["magnitude"]
    mag = np.abs(vals).reshape(len(kn), len(wn))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for j, k in enumerate(kn):
            for m, om in enumerate(wn):
                w.writerow([repr(float(x)) for x in k] + [repr(float(x)) for x in om]
                           + [repr(float(mag[j, m]))])


# --- WAV ---------------------------------------------------------------------------

def read_wav(path) -> tuple[int, np.ndarray]:
    """Mono samples as floats in [-1, 1] (multichannel input is averaged)."""
    rate, data = wavfile.read(path)
    if np.issubdtype(data.dtype, np.integer):
        info = np.iinfo(data.dtype)
        if info.min == 0:  # unsigned 8-bit PCM is offset binary
            data = (data.astype(float) - (info.max + 1) / 2) / ((info.max + 1) / 2)
        else:
            data = data.astype(float) / max(-info.min, info.max)
    else:
        data = data.astype(float)
    if data.ndim == 2:
        data = data.mean(axis=1)
    return int(rate), data


def lift_wav(path, group: GroupDescriptor, h_grid: Grid1D, k_grid: ProductGrid,
             sigma: float = 0.5) -> SliceField:
    """f(a, x) = w(a) s(x), w(a) = exp(-(ln a)^2 / (2 sigma^2)), with the
    samples s placed on the K-grid nodes in order."""
    if group.name != "affine":
        raise ValueError("WAV input is lifted onto the affine group only")
    _, s = read_wav(path)
    if s.shape != k_grid.shape:
        raise ValueError(f"WAV has {s.size} samples but the K-grid has {k_grid.size} nodes")
    w = np.exp(-0.5 * (np.log(h_grid.points) / sigma) ** 2)
    return SliceField(np.multiply.outer(w, s).astype(complex), h_grid, k_grid, group)
