"""Reports, run manifests, and deterministic output writers.

Floats written to CSV use 17 significant digits so that a round-trip through
the file reproduces the exact double.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


def fmt17(value: float) -> str:
    """Format a float with 17 significant digits (lossless for float64)."""
    return format(float(value), ".17g")


@dataclass
class IdentityReport:
    """Outcome of one verification suite.

    ``failures == 0`` means the suite passed; ``max_residual`` is the largest
    numeric residual seen (0.0 for exact integer suites).
    """

    suite: str
    cases: int = 0
    failures: int = 0
    max_residual: float = 0.0
    seed: int = 0
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": self.failures,
            "max_residual": self.max_residual,
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
        }

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"[{status}] {self.suite}: cases={self.cases} "
            f"failures={self.failures} max_residual={self.max_residual:.3e} "
            f"({self.elapsed_ms} ms)"
        )


@dataclass
class RunManifest:
    """Reproducibility record written next to every generated artifact."""

    command: list[str]
    config: dict
    seed: int
    version: str
    outputs: dict[str, str] = field(default_factory=dict)

    def add_output(self, path: str) -> None:
        self.outputs[path] = file_digest(path)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "outputs": self.outputs,
        }

    def write(self, path: str) -> None:
        with open(path, "w", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


def file_digest(path: str) -> str:
    """SHA-256 hex digest of a file."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def spectrum_csv_header(n: int) -> str:
    xs = ",".join(f"x{i + 1}" for i in range(n))
    ms = ",".join(f"mult{i + 1}" for i in range(n))
    return f"sample_id,model,n,t,{xs},{ms},spread"


def spectrum_csv_row(sample_id: int, kind: str, n: int, t: float, sample) -> str:
    """One CSV row; draws with an unexpected cluster count are NaN-padded."""
    xs = list(sample.distinct)
    ms = list(sample.multiplicities)
    xs = xs[:n] + [float("nan")] * max(0, n - len(xs))
    ms = ms[:n] + [0] * max(0, n - len(ms))
    cells = [str(sample_id), kind, str(n), fmt17(t)]
    cells += [fmt17(x) for x in xs]
    cells += [str(int(m)) for m in ms]
    cells.append(fmt17(sample.spread))
    return ",".join(cells)


def write_spectrum_csv(path: str, samples, kind: str, n: int, t: float) -> None:
    """Write per-sample spectra; byte-deterministic for a fixed sample list."""
    with open(path, "w", newline="\n") as fh:
        fh.write(spectrum_csv_header(n) + "\n")
        for i, s in enumerate(samples):
            fh.write(spectrum_csv_row(i, kind, n, t, s) + "\n")


def write_stats_json(path: str, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
