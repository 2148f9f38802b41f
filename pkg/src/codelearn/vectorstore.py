"""In-process vector index: exact cosine-similarity KNN with metadata filtering.

Stored embeddings are L2-normalized at insert time so a search is a single
matrix-vector dot product; the raw norm is kept per chunk. The scan is exact
by design -- at desk scale a full scan is both the fastest practical option
and the definition the tests check against.
"""

from __future__ import annotations

import json
import logging
import struct
import tempfile
import threading
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CorruptIndex,
    DimensionMismatch,
    DuplicateId,
    IoFailure,
    ZeroNormVector,
)

logger = logging.getLogger(__name__)

MAGIC = b"CLVECIDX"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sIIQI")  # magic, version, dimension, count, payload crc32


def as_vector(values: Sequence[float]) -> np.ndarray:
    """Validate and convert an embedding to a 1-D float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatch(f"expected a 1-D non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("embedding contains NaN or Inf")
    return arr


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine of the angle between two vectors, computed in float64.

    Raises DimensionMismatch on unequal dimensions and ZeroNormVector when
    either vector has zero length (the measure is undefined there).
    """
    va, vb = as_vector(a), as_vector(b)
    if va.size != vb.size:
        raise DimensionMismatch(f"dimensions differ: {va.size} vs {vb.size}")
    na, nb = float(np.linalg.norm(va)), float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ZeroNormVector("cosine similarity is undefined for a zero-norm vector")
    score = float(np.dot(va, vb) / (na * nb))
    return max(-1.0, min(1.0, score))


@dataclass
class Chunk:
    """Embedded text unit; the retrieval atom."""

    source_id: str
    text: str
    metadata: dict
    embedding: Sequence[float]
    chunk_id: int | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("chunk text must be non-empty")


@dataclass(frozen=True)
class SearchHit:
    chunk_id: int
    score: float
    rank: int  # 1-based


@dataclass(frozen=True)
class MetadataFilter:
    """Conjunctive filter; an empty filter matches every chunk."""

    topic: str | None = None
    difficulty: str | None = None
    kind: str | None = None

    def matches(self, metadata: dict) -> bool:
        for key in ("topic", "difficulty", "kind"):
            want = getattr(self, key)
            if want is not None and metadata.get(key) != want:
                return False
        return True


@dataclass(frozen=True)
class _Record:
    chunk_id: int
    source_id: str
    text: str
    metadata: dict
    unit: np.ndarray  # L2-normalized embedding, or zeros when raw norm was 0
    raw_norm: float


class VectorIndex:
    """Exact-cosine KNN index with copy-on-write snapshots.

    Concurrency: inserts take the writer lock and publish a fresh immutable
    snapshot; searches read the current snapshot once and never observe a
    partial insert.
    """

    def __init__(self, dimension: int | None = None):
        if dimension is not None and dimension <= 0:
            raise ValueError("dimension must be positive")
        self._dimension = dimension
        self._lock = threading.Lock()
        self._records: tuple[_Record, ...] = ()
        self._matrix: np.ndarray | None = None
        self._zero_norm_count = 0

    # --- introspection ---

    @property
    def dimension(self) -> int | None:
        return self._dimension

    @property
    def zero_norm_count(self) -> int:
        return self._zero_norm_count

    def __len__(self) -> int:
        return len(self._records)

    def chunk_ids(self) -> list[int]:
        return [r.chunk_id for r in self._records]

    def get(self, chunk_id: int) -> Chunk:
        for r in self._records:
            if r.chunk_id == chunk_id:
                return Chunk(
                    source_id=r.source_id,
                    text=r.text,
                    metadata=dict(r.metadata),
                    embedding=r.unit * (r.raw_norm if r.raw_norm > 0 else 1.0),
                    chunk_id=r.chunk_id,
                )
        raise KeyError(chunk_id)

    # --- mutation ---

    def insert(self, chunk: Chunk) -> int:
        vec = as_vector(chunk.embedding)
        with self._lock:
            if self._dimension is None:
                self._dimension = vec.size
            elif vec.size != self._dimension:
                raise DimensionMismatch(
                    f"index dimension is {self._dimension}, got {vec.size}"
                )
            existing = {r.chunk_id for r in self._records}
            if chunk.chunk_id is not None:
                if chunk.chunk_id in existing:
                    raise DuplicateId(f"chunk_id {chunk.chunk_id} already present")
                chunk_id = chunk.chunk_id
            else:
                chunk_id = max(existing, default=0) + 1
            raw_norm = float(np.linalg.norm(vec))
            if raw_norm > 0:
                # rounded to storage precision up front so persist/load is exact
                unit = (vec / raw_norm).astype("<f4").astype(np.float64)
            else:
                unit = np.zeros_like(vec)
                self._zero_norm_count += 1
                logger.warning("chunk %s has a zero-norm embedding; excluded from search", chunk_id)
            record = _Record(chunk_id, chunk.source_id, chunk.text, dict(chunk.metadata), unit, raw_norm)
            self._records = self._records + (record,)
            self._matrix = None  # rebuilt lazily on next search
            return chunk_id

    def insert_many(self, chunks: Iterable[Chunk]) -> list[int]:
        return [self.insert(c) for c in chunks]

    # --- search ---

    def _unit_matrix(self, records: tuple[_Record, ...]) -> np.ndarray:
        with self._lock:
            if self._matrix is None or self._matrix.shape[0] != len(records):
                self._matrix = (
                    np.vstack([r.unit for r in records])
                    if records
                    else np.empty((0, self._dimension or 0))
                )
            return self._matrix

    def knn_search(
        self,
        query: Sequence[float],
        k: int,
        filter: MetadataFilter | None = None,
    ) -> list[SearchHit]:
        """Top-k chunks by cosine score, ties broken by ascending chunk_id."""
        if k < 1:
            raise ValueError("k must be >= 1")
        q = as_vector(query)
        qnorm = float(np.linalg.norm(q))
        if qnorm == 0.0:
            raise ZeroNormVector("query vector has zero norm")
        records = self._records  # consistent snapshot
        if not records:
            return []
        if self._dimension is not None and q.size != self._dimension:
            raise DimensionMismatch(f"index dimension is {self._dimension}, got {q.size}")
        qunit = q / qnorm
        scores = self._unit_matrix(records) @ qunit
        flt = filter or MetadataFilter()
        candidates = [
            (float(max(-1.0, min(1.0, scores[i]))), r.chunk_id)
            for i, r in enumerate(records)
            if r.raw_norm > 0 and flt.matches(r.metadata)
        ]
        candidates.sort(key=lambda t: (-t[0], t[1]))
        return [
            SearchHit(chunk_id=cid, score=score, rank=rank)
            for rank, (score, cid) in enumerate(candidates[:k], start=1)
        ]

    def find_duplicates(self, threshold: float) -> list[tuple[int, int, float]]:
        """All unordered chunk pairs with cosine >= threshold, each once."""
        if not 0.0 < threshold <= 1.0:
            raise ValueError("threshold must be in (0, 1]")
        records = [r for r in self._records if r.raw_norm > 0]
        if len(records) < 2:
            return []
        mat = np.vstack([r.unit for r in records])
        sims = mat @ mat.T
        pairs = []
        for i in range(len(records)):
            for j in range(i + 1, len(records)):
                score = float(max(-1.0, min(1.0, sims[i, j])))
                if score >= threshold:
                    pairs.append((records[i].chunk_id, records[j].chunk_id, score))
        return pairs

    # --- persistence ---

    def persist(self, path: str | Path) -> None:
        path = Path(path)
        records = self._records
        dimension = self._dimension or 0
        payload = bytearray()
        for r in records:
            payload += struct.pack("<Qd", r.chunk_id, r.raw_norm)
            for text in (r.source_id, r.text, json.dumps(r.metadata, sort_keys=True)):
                raw = text.encode("utf-8")
                payload += struct.pack("<I", len(raw)) + raw
            payload += r.unit.astype("<f4").tobytes()
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, dimension, len(records), zlib.crc32(payload))
        try:
            with tempfile.NamedTemporaryFile(
                "wb", dir=path.parent, prefix=path.name, suffix=".tmp", delete=False
            ) as tmp:
                tmp.write(header)
                tmp.write(payload)
            Path(tmp.name).replace(path)
        except OSError as exc:
            raise IoFailure(f"cannot persist index to {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        try:
            blob = Path(path).read_bytes()
        except OSError as exc:
            raise IoFailure(f"cannot read index file {path}: {exc}") from exc
        if len(blob) < _HEADER.size:
            raise CorruptIndex("file too short for index header")
        magic, version, dimension, count, crc = _HEADER.unpack_from(blob)
        if magic != MAGIC:
            raise CorruptIndex("bad magic; not an index file")
        if version != FORMAT_VERSION:
            raise CorruptIndex(f"unsupported index version {version}")
        payload = blob[_HEADER.size:]
        if zlib.crc32(payload) != crc:
            raise CorruptIndex("payload checksum mismatch")
        index = cls(dimension=dimension or None)
        records = []
        offset = 0
        try:
            for _ in range(count):
                chunk_id, raw_norm = struct.unpack_from("<Qd", payload, offset)
                offset += 16
                fields = []
                for _ in range(3):
                    (length,) = struct.unpack_from("<I", payload, offset)
                    offset += 4
                    if offset + length > len(payload):
                        raise CorruptIndex("record overruns payload")
                    fields.append(payload[offset:offset + length].decode("utf-8"))
                    offset += length
                vec_bytes = payload[offset:offset + 4 * dimension]
                if len(vec_bytes) < 4 * dimension:
                    raise CorruptIndex("truncated embedding record")
                offset += 4 * dimension
                unit = np.frombuffer(vec_bytes, dtype="<f4").astype(np.float64)
                source_id, text, meta_json = fields
                records.append(
                    _Record(chunk_id, source_id, text, json.loads(meta_json), unit, raw_norm)
                )
        except (struct.error, UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise CorruptIndex(f"malformed record data: {exc}") from exc
        if offset != len(payload):
            raise CorruptIndex("trailing bytes after last record")
        index._records = tuple(records)
        index._zero_norm_count = sum(1 for r in records if r.raw_norm == 0.0)
        return index
