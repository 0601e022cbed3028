"""Deterministic binary serialization of posterior draws.

Layout (all integers little-endian):

    bytes 0-7    magic b"VORTESS\\0"
    bytes 8-11   uint32 format version (currently 1)
    bytes 12-19  uint64 byte length of the JSON header
    ...          header: UTF-8 JSON, sorted keys, compact separators
    ...          body arrays, back to back, in this order:
                   member_counts  int32 [n_draws]
                   dim_counts     int32 [total members]
                   centre_counts  int32 [total members]
                   dims           int32 [sum of dim_counts]
                   centres        float64 [sum of centre_counts * dim_counts]
                   outputs        float64 [sum of centre_counts]

The header records n_draws, n_features, the sampler config, and the
optional feature names and preprocessor state. Nothing in the file
depends on time or environment, so identical draws serialize to
identical bytes.

Tessellations repeated across consecutive snapshots (rejected structure
moves) are deduplicated on load so snapshots share objects again, which
keeps memory flat and lets prediction reuse cell assignments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import Preprocessor
from .exceptions import DataError
from .sampler import PosteriorDraws, SamplerConfig
from .tessellation import Tessellation

__all__ = ["MAGIC", "FORMAT_VERSION", "save_model", "load_model", "LoadedModel"]

MAGIC = b"VORTESS\x00"
FORMAT_VERSION = 1


@dataclass
class LoadedModel:
    draws: PosteriorDraws
    feature_names: tuple | None
    preprocessor: Preprocessor | None


def save_model(path, draws: PosteriorDraws, feature_names=None,
               preprocessor: Preprocessor | None = None) -> None:
    """Write draws (plus optional naming/preprocessing state) to ``path``."""
    member_counts, dim_counts, centre_counts = [], [], []
    dims_parts, centre_parts, output_parts = [], [], []
    for snapshot in draws.snapshots:
        member_counts.append(len(snapshot))
        for tess, outputs in snapshot:
            dim_counts.append(tess.n_dims)
            centre_counts.append(tess.n_centres)
            dims_parts.append(tess.dims)
            centre_parts.append(tess.centres.ravel())
            output_parts.append(np.asarray(outputs, dtype=np.float64))

    header = {
        "config": draws.config.to_dict(),
        "feature_names": None if feature_names is None else list(feature_names),
        "format": FORMAT_VERSION,
        "n_draws": draws.n_draws,
        "n_features": draws.n_features,
        "preprocessor": None if preprocessor is None else preprocessor.to_dict(),
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")

    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.uint32(FORMAT_VERSION).tobytes())
        fh.write(np.uint64(len(header_bytes)).tobytes())
        fh.write(header_bytes)
        fh.write(np.asarray(member_counts, dtype="<i4").tobytes())
        fh.write(np.asarray(dim_counts, dtype="<i4").tobytes())
        fh.write(np.asarray(centre_counts, dtype="<i4").tobytes())
        fh.write(np.concatenate(dims_parts).astype("<i4").tobytes())
        fh.write(np.concatenate(centre_parts).astype("<f8").tobytes())
        fh.write(np.concatenate(output_parts).astype("<f8").tobytes())


def _take(buffer: memoryview, offset: int, dtype, count: int):
    width = np.dtype(dtype).itemsize
    end = offset + width * count
    if end > len(buffer):
        raise DataError("model file truncated")
    return np.frombuffer(buffer[offset:end], dtype=dtype), end


def load_model(path) -> LoadedModel:
    """Read a model file back into posterior draws."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except FileNotFoundError:
        raise DataError("no such model file: %s" % (path,)) from None
    if len(blob) < len(MAGIC) + 12 or blob[: len(MAGIC)] != MAGIC:
        raise DataError("%s is not a model file (bad magic)" % (path,))
    view = memoryview(blob)
    offset = len(MAGIC)
    version = int(np.frombuffer(view[offset:offset + 4], dtype="<u4")[0])
    offset += 4
    if version != FORMAT_VERSION:
        raise DataError("unsupported model format version %d" % version)
    header_len = int(np.frombuffer(view[offset:offset + 8], dtype="<u8")[0])
    offset += 8
    if offset + header_len > len(blob):
        raise DataError("model file truncated")
    try:
        header = json.loads(bytes(view[offset:offset + header_len]).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError("unreadable model header: %s" % exc) from None
    offset += header_len

    n_draws = int(header["n_draws"])
    member_counts, offset = _take(view, offset, "<i4", n_draws)
    total_members = int(member_counts.sum())
    dim_counts, offset = _take(view, offset, "<i4", total_members)
    centre_counts, offset = _take(view, offset, "<i4", total_members)
    dims_flat, offset = _take(view, offset, "<i4", int(dim_counts.sum()))
    centres_flat, offset = _take(
        view, offset, "<f8", int((centre_counts.astype(np.int64) * dim_counts).sum())
    )
    outputs_flat, offset = _take(view, offset, "<f8", int(centre_counts.sum()))
    if offset != len(blob):
        raise DataError("model file has %d trailing bytes" % (len(blob) - offset))

    snapshots = []
    shared: dict[bytes, Tessellation] = {}
    pos_d = pos_c = pos_o = member = 0
    for k in range(n_draws):
        members = []
        for _ in range(int(member_counts[k])):
            d = int(dim_counts[member])
            b = int(centre_counts[member])
            dims = dims_flat[pos_d:pos_d + d]
            centres = centres_flat[pos_c:pos_c + b * d]
            outputs = outputs_flat[pos_o:pos_o + b].copy()
            pos_d += d
            pos_c += b * d
            pos_o += b
            member += 1
            key = dims.tobytes() + centres.tobytes()
            tess = shared.get(key)
            if tess is None:
                tess = Tessellation(dims.astype(np.int64), centres.reshape(b, d))
                shared[key] = tess
            members.append((tess, outputs))
        snapshots.append(tuple(members))

    draws = PosteriorDraws(
        snapshots=tuple(snapshots),
        n_features=int(header["n_features"]),
        config=SamplerConfig.from_dict(header["config"]),
        diagnostics=None,
        test_scores=None,
    )
    names = header.get("feature_names")
    prep = header.get("preprocessor")
    return LoadedModel(
        draws=draws,
        feature_names=None if names is None else tuple(names),
        preprocessor=None if prep is None else Preprocessor.from_dict(prep),
    )
