# figprune_db/repositories/checkpoint.py

"""
checkpoint.py – Checkpoint File Repository

One checkpoint is one file:

    [8 bytes]  little-endian unsigned length N of the manifest
    [N bytes]  UTF-8 JSON manifest, keys sorted
    [rest]     little-endian float64 payload, parameters back to back

The manifest records the format version, model / train configs, task,
vocabulary, head gates, metadata, each parameter's name, shape, offset and
count (in floats), and the SHA-256 of the payload. Nothing time-dependent is
stored, so saving the same checkpoint twice gives identical bytes.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import struct

import numpy as np

from config import CHECKPOINT_FORMAT_VERSION, ModelConfig, TaskSpec, TrainConfig
from model import HeadMask
from training.checkpoint import Checkpoint, CheckpointMetadata
from utils.errors import ShapeMismatchError, TruncatedCheckpointError, VersionMismatchError
from utils.tokenizer import Vocabulary
from ..base import BaseRepository

logger = logging.getLogger(__name__)

HEADER = struct.Struct("<Q")
PAYLOAD_DTYPE = np.dtype("<f8")


class CheckpointRepository(BaseRepository):
    """Saves and restores `Checkpoint` objects."""

    def save(self, checkpoint: Checkpoint) -> None:
        tensors = []
        chunks = []
        offset = 0
        for name in sorted(checkpoint.parameters):
            array = np.ascontiguousarray(checkpoint.parameters[name], dtype=PAYLOAD_DTYPE)
            tensors.append({"name": name, "shape": list(array.shape), "offset": offset, "count": int(array.size)})
            chunks.append(array.tobytes())
            offset += array.size
        payload = b"".join(chunks)

        manifest = {
            "format_version": CHECKPOINT_FORMAT_VERSION,
            "model_config": dataclasses.asdict(checkpoint.model_config),
            "train_config": dataclasses.asdict(checkpoint.train_config),
            "task": dataclasses.asdict(checkpoint.task),
            "vocab": list(checkpoint.vocab.pieces),
            "head_mask": checkpoint.head_mask.gates.astype(int).tolist(),
            "metadata": dataclasses.asdict(checkpoint.metadata),
            "tensors": tensors,
            "payload_bytes": len(payload),
            "payload_sha256": hashlib.sha256(payload).hexdigest(),
        }
        manifest_bytes = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode("utf-8")
        self.write_bytes(HEADER.pack(len(manifest_bytes)) + manifest_bytes + payload)
        logger.info(f"Saved checkpoint ({len(tensors)} tensors, {len(payload)} payload bytes) to {self.path}")

    def load(self) -> Checkpoint:
        """
        Reads and verifies a checkpoint file.

        Raises:
            TruncatedCheckpointError: If the file is short or its payload checksum fails.
            VersionMismatchError: If the format version differs.
            ShapeMismatchError: If a tensor or the head mask does not fit the stored config.
        """
        raw = self.read_bytes()
        if len(raw) < HEADER.size:
            raise TruncatedCheckpointError(f"{self.path}: file shorter than its header")
        (manifest_len,) = HEADER.unpack_from(raw)
        if len(raw) < HEADER.size + manifest_len:
            raise TruncatedCheckpointError(f"{self.path}: manifest declared {manifest_len} bytes, file ends early")
        try:
            manifest = json.loads(raw[HEADER.size:HEADER.size + manifest_len].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise TruncatedCheckpointError(f"{self.path}: manifest is corrupt: {e}") from e

        version = manifest.get("format_version")
        if version != CHECKPOINT_FORMAT_VERSION:
            raise VersionMismatchError(
                f"{self.path}: format version {version}, this build reads {CHECKPOINT_FORMAT_VERSION}"
            )

        payload = raw[HEADER.size + manifest_len:]
        if len(payload) != manifest["payload_bytes"]:
            raise TruncatedCheckpointError(
                f"{self.path}: payload has {len(payload)} bytes, manifest declares {manifest['payload_bytes']}"
            )
        if hashlib.sha256(payload).hexdigest() != manifest["payload_sha256"]:
            raise TruncatedCheckpointError(f"{self.path}: payload checksum mismatch")

        flat = np.frombuffer(payload, dtype=PAYLOAD_DTYPE)
        parameters: dict[str, np.ndarray] = {}
        for entry in manifest["tensors"]:
            start, count = entry["offset"], entry["count"]
            if int(np.prod(entry["shape"], dtype=np.int64)) != count or start + count > flat.size:
                raise ShapeMismatchError(f"{self.path}: tensor {entry['name']!r} does not fit the payload")
            parameters[entry["name"]] = flat[start:start + count].reshape(entry["shape"]).astype(np.float64)

        model_config = ModelConfig(**manifest["model_config"])
        gates = np.asarray(manifest["head_mask"], dtype=np.float64)
        if gates.shape != (model_config.n_layers, model_config.n_heads):
            raise ShapeMismatchError(
                f"{self.path}: head mask shape {list(gates.shape)} does not match "
                f"({model_config.n_layers}, {model_config.n_heads})"
            )
        checkpoint = Checkpoint(
            model_config=model_config,
            parameters=parameters,
            head_mask=HeadMask(gates),
            train_config=TrainConfig(**manifest["train_config"]),
            vocab=Vocabulary(tuple(manifest["vocab"])),
            task=TaskSpec(**manifest["task"]),
            metadata=CheckpointMetadata(**manifest["metadata"]),
        )
        logger.info(f"Loaded checkpoint from {self.path} (epoch {checkpoint.metadata.epoch})")
        return checkpoint
