"""Run manifests: enough provenance to replay any CLI invocation exactly.

Each subcommand that writes files drops a JSON manifest next to its
outputs recording the resolved flag set, the seeds, 64-bit content hashes
of every input file, the tool version, and wall-clock duration. Replaying
the recorded flags reproduces the outputs byte for byte (the manifest
itself is the only artifact that varies, through its duration field).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path


def content_hash(path: Path | str) -> str:
    """64-bit BLAKE2b digest of a file's bytes, hex-encoded."""
    h = hashlib.blake2b(digest_size=8)
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    flags: dict
    seeds: dict
    tool_version: str
    input_digests: dict = field(default_factory=dict)
    output_digests: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    duration_seconds: float = 0.0

    def add_input(self, path: Path | str) -> None:
        self.input_digests[str(path)] = content_hash(path)

    def add_output(self, path: Path | str) -> None:
        self.output_digests[str(path)] = content_hash(path)

    def write(self, path: Path | str) -> None:
        payload = {
            "subcommand": self.subcommand,
            "flags": self.flags,
            "seeds": self.seeds,
            "tool_version": self.tool_version,
            "input_digests": self.input_digests,
            "output_digests": self.output_digests,
            "extras": self.extras,
            "duration_seconds": self.duration_seconds,
        }
        Path(path).write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )


def read_manifest(path: Path | str) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
