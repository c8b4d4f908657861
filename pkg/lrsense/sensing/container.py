# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Flat binary container for ensembles, datasets and matrix lists.

Layout (all little-endian)::

    magic     8 bytes  b"LRSENSE1"
    header    4 x uint64  m, n, kind, seed
    trailer   3 x uint64  sections, noise_kind, noise_seed
    payload   float64, in section order:
              MATRICES      n * m * m   (row-major X_1..X_n)
              RESPONSES     1 + n       (sigma_xi, Y_1..Y_n)
              NOISE         n           (xi_1..xi_n)
              GROUND_TRUTH  m * m       (A0, row-major)
"""

import logging
import os
import struct
from enum import IntFlag
from pathlib import Path

import numpy as np

from lrsense.paths import CACHE_DIR
from lrsense.sensing.ensemble import (
    EnsembleKind,
    EnsembleSpec,
    MeasurementEnsemble,
    NoiseKind,
    TraceRegressionDataset,
    sample_ensemble,
)
from lrsense.utils.status import ContainerError

logger = logging.getLogger(__name__)

MAGIC = b"LRSENSE1"
HEADER = struct.Struct("<4Q")
# Which payload sections follow, and how the stored noise was drawn
TRAILER = struct.Struct("<3Q")
FLOAT = np.dtype("<f8")

KIND_CODES = {EnsembleKind.GAUSSIAN: 0, EnsembleKind.RADEMACHER: 1}
MATRIX_LIST_CODE = 2
NOISE_CODES = {NoiseKind.GAUSSIAN: 0, NoiseKind.RADEMACHER_SCALED: 1}


class Section(IntFlag):
    MATRICES = 1
    RESPONSES = 2
    NOISE = 4
    GROUND_TRUTH = 8


def _write(path, m, n, kind, seed, sections, noise_kind, noise_seed, arrays):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(HEADER.pack(m, n, kind, seed))
        f.write(TRAILER.pack(int(sections), noise_kind, noise_seed))
        for array in arrays:
            f.write(np.ascontiguousarray(array, dtype=FLOAT).tobytes())


def _read(path):
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise ContainerError(path, "file not found")
    if data[: len(MAGIC)] != MAGIC:
        raise ContainerError(path, "bad magic")
    if len(data) < len(MAGIC) + HEADER.size + TRAILER.size:
        raise ContainerError(path, "truncated header")
    m, n, kind, seed = HEADER.unpack_from(data, len(MAGIC))
    sections, noise_kind, noise_seed = TRAILER.unpack_from(data, len(MAGIC) + HEADER.size)
    sections = Section(sections)

    sizes = []
    if Section.MATRICES in sections:
        sizes.append((Section.MATRICES, n * m * m))
    if Section.RESPONSES in sections:
        sizes.append((Section.RESPONSES, 1 + n))
    if Section.NOISE in sections:
        sizes.append((Section.NOISE, n))
    if Section.GROUND_TRUTH in sections:
        sizes.append((Section.GROUND_TRUTH, m * m))

    offset = len(MAGIC) + HEADER.size + TRAILER.size
    expected = offset + FLOAT.itemsize * sum(size for _, size in sizes)
    if len(data) != expected:
        raise ContainerError(path, f"payload is {len(data)} bytes, expected {expected}")

    payload = {}
    for section, size in sizes:
        payload[section] = np.frombuffer(data, dtype=FLOAT, count=size, offset=offset).astype(np.float64)
        offset += FLOAT.itemsize * size
    header = {
        "m": m,
        "n": n,
        "kind": kind,
        "seed": seed,
        "sections": sections,
        "noise_kind": noise_kind,
        "noise_seed": noise_seed,
    }
    return header, payload


def _ensemble_from(path, header, payload) -> MeasurementEnsemble:
    if Section.MATRICES not in header["sections"]:
        raise ContainerError(path, "no measurement matrices stored")
    if header["kind"] not in KIND_CODES.values():
        raise ContainerError(path, f"kind code {header['kind']} is not an ensemble")
    kind = next(k for k, code in KIND_CODES.items() if code == header["kind"])
    m, n = header["m"], header["n"]
    matrices = payload[Section.MATRICES].reshape(n, m, m)
    return MeasurementEnsemble(spec=EnsembleSpec(kind=kind, m=m, n=n, seed=header["seed"]), matrices=matrices)


def save_ensemble(path, ensemble: MeasurementEnsemble):
    spec = ensemble.spec
    _write(path, ensemble.m, ensemble.n, KIND_CODES[spec.kind], spec.seed, Section.MATRICES, 0, 0, [ensemble.matrices])


def load_ensemble(path) -> MeasurementEnsemble:
    header, payload = _read(path)
    return _ensemble_from(path, header, payload)


def save_dataset(path, dataset: TraceRegressionDataset):
    """Store a dataset; noise and ground truth are written when present."""
    ensemble = dataset.ensemble
    sections = Section.MATRICES | Section.RESPONSES
    arrays = [ensemble.matrices, np.concatenate([[dataset.sigma_xi], dataset.responses])]
    if dataset.noise is not None:
        sections |= Section.NOISE
        arrays.append(dataset.noise)
    if dataset.A0 is not None:
        sections |= Section.GROUND_TRUTH
        arrays.append(dataset.A0)
    _write(
        path,
        ensemble.m,
        ensemble.n,
        KIND_CODES[ensemble.kind],
        ensemble.spec.seed,
        sections,
        NOISE_CODES[dataset.noise_kind],
        dataset.noise_seed,
        arrays,
    )


def load_dataset(path) -> TraceRegressionDataset:
    header, payload = _read(path)
    if Section.RESPONSES not in header["sections"]:
        raise ContainerError(path, "no responses stored")
    ensemble = _ensemble_from(path, header, payload)
    observations = payload[Section.RESPONSES]
    m = header["m"]
    A0 = payload[Section.GROUND_TRUTH].reshape(m, m) if Section.GROUND_TRUTH in header["sections"] else None
    noise_kind = next((k for k, code in NOISE_CODES.items() if code == header["noise_kind"]), None)
    if noise_kind is None:
        raise ContainerError(path, f"unknown noise kind code {header['noise_kind']}")
    return TraceRegressionDataset(
        ensemble=ensemble,
        A0=A0,
        sigma_xi=float(observations[0]),
        noise=payload.get(Section.NOISE),
        responses=observations[1:],
        noise_kind=noise_kind,
        noise_seed=header["noise_seed"],
    )


def save_matrices(path, matrices, seed: int = 0):
    """Store a list of equally sized square matrices (estimates, minimax families)."""
    matrices = np.asarray(matrices, dtype=np.float64)
    if matrices.ndim == 2:
        matrices = matrices[None]
    count, m = matrices.shape[0], matrices.shape[1]
    _write(path, m, count, MATRIX_LIST_CODE, seed, Section.MATRICES, 0, 0, [matrices])


def load_matrices(path) -> np.ndarray:
    header, payload = _read(path)
    if Section.MATRICES not in header["sections"]:
        raise ContainerError(path, "no matrices stored")
    m = header["m"]
    return payload[Section.MATRICES].reshape(header["n"], m, m)


class EnsembleCache:
    """An on-disk cache of sampled ensembles, one container per spec."""

    def __init__(self, cache_dir=None) -> None:
        self.cache_dir = Path(cache_dir) if cache_dir else CACHE_DIR
        os.makedirs(self.cache_dir, exist_ok=True)

    def path_for(self, spec: EnsembleSpec) -> Path:
        return self.cache_dir / f"{spec.kind.value}_m{spec.m}_n{spec.n}_s{spec.seed}.bin"

    def get_from_cache(self, spec: EnsembleSpec):
        path = self.path_for(spec)
        if not path.exists():
            return None
        try:
            return load_ensemble(path)
        except ContainerError as e:
            logger.warning(f"Ignoring unreadable cache entry: {e}")
            return None

    def add_to_cache(self, ensemble: MeasurementEnsemble):
        save_ensemble(self.path_for(ensemble.spec), ensemble)

    def get_or_sample(self, spec: EnsembleSpec) -> MeasurementEnsemble:
        ensemble = self.get_from_cache(spec)
        if ensemble is None:
            ensemble = sample_ensemble(spec)
            self.add_to_cache(ensemble)
        return ensemble
