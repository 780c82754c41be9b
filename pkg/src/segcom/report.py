"""Run reports: what a detection run did, as diff-friendly structured text."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .game import SweepLog

__all__ = ["RunReport", "REPORT_HEADER"]

REPORT_HEADER = "# segcom report v1"


@dataclass
class RunReport:
    """Summary of one detection run (both phases)."""

    input_path: str
    nodes: int
    edges: int
    directed: bool
    weighted: bool
    rule: str
    tau_n: float
    gamma: float
    workers: int
    max_iterations: int
    seed: Optional[int]
    overlapping: bool
    iterations: int
    communities: int
    detect_seconds: float
    overlap_seconds: float
    final_entropy: Optional[float] = None
    sweeps: list[SweepLog] = field(default_factory=list)

    def render(self) -> str:
        """Key-value lines, then one row per sweep; header line is frozen."""
        rows = [
            REPORT_HEADER,
            f"input\t{self.input_path}",
            f"nodes\t{self.nodes}",
            f"edges\t{self.edges}",
            f"directed\t{_flag(self.directed)}",
            f"weighted\t{_flag(self.weighted)}",
            f"rule\t{self.rule}",
            f"tau_n\t{self.tau_n:g}",
            f"gamma\t{self.gamma:g}",
            f"workers\t{self.workers}",
            f"max_iterations\t{self.max_iterations}",
            f"seed\t{self.seed if self.seed is not None else 'none'}",
            f"overlapping\t{_flag(self.overlapping)}",
            f"iterations\t{self.iterations}",
            f"communities\t{self.communities}",
            f"final_entropy\t{_entropy_field(self.final_entropy)}",
            f"detect_seconds\t{self.detect_seconds:.6f}",
            f"overlap_seconds\t{self.overlap_seconds:.6f}",
            f"total_seconds\t{self.detect_seconds + self.overlap_seconds:.6f}",
            "sweep\tmoved\tdelta_sum\tseconds",
        ]
        for i, sweep in enumerate(self.sweeps, start=1):
            rows.append(f"{i}\t{sweep.moved}\t{sweep.delta_sum:.6f}\t{sweep.seconds:.6f}")
        return "\n".join(rows) + "\n"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _entropy_field(value: Optional[float]) -> str:
    return "nan" if value is None else f"{value:.6f}"
