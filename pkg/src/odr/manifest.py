"""Run manifests: one JSON record per command invocation.

A manifest pins everything needed to rerun the command: the full flag
configuration (hashed for quick comparison), the seeds, the input and
output paths, and a content hash over the produced artifacts. It lives
next to the command's first output. Wall time and the manifest itself are
run records, not artifacts: rerun comparisons look at the outputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def artifact_version(outputs: list[str | Path]) -> str:
    """Content hash over all file outputs, in path order; directories and
    missing files contribute their name only (live artifacts)."""
    lines = []
    for out in outputs:
        p = Path(out)
        if p.is_file():
            lines.append(f"{p.name}:{file_digest(p)}")
        else:
            lines.append(f"{p.name}:live")
    joined = "\n".join(lines)
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: dict
    config_hash: str
    seeds: dict
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    artifact_version: str
    wall_time_s: float

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "config_hash": self.config_hash,
            "seeds": self.seeds,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "artifact_version": self.artifact_version,
            "wall_time_s": self.wall_time_s,
        }


def build_manifest(
    command: str,
    config: dict,
    seeds: dict,
    inputs: list[str | Path],
    outputs: list[str | Path],
    wall_time_s: float,
) -> RunManifest:
    return RunManifest(
        command=command,
        config=config,
        config_hash=config_hash(config),
        seeds=seeds,
        inputs=tuple(str(p) for p in inputs),
        outputs=tuple(str(p) for p in outputs),
        artifact_version=artifact_version(outputs),
        wall_time_s=wall_time_s,
    )


def manifest_path(outputs: list[str | Path], command: str) -> Path:
    """Manifest location: next to the first output file, or inside the
    first output directory for directory-shaped outputs."""
    first = Path(outputs[0])
    if first.is_dir():
        return first / f"{command}.manifest.json"
    return first.parent / f"{first.name}.manifest.json"


def write_manifest(manifest: RunManifest, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest.to_json_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


def read_manifest(path: str | Path) -> RunManifest:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return RunManifest(
        command=obj["command"],
        config=obj["config"],
        config_hash=obj["config_hash"],
        seeds=obj["seeds"],
        inputs=tuple(obj["inputs"]),
        outputs=tuple(obj["outputs"]),
        artifact_version=obj["artifact_version"],
        wall_time_s=float(obj["wall_time_s"]),
    )
