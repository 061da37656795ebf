"""Result and error types shared by the solver backends."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class SolveResult:
    status: str  # 'sat' | 'unsat' | 'timeout'
    model: dict[int, bool] | None = None
    conflicts: int = 0
    decisions: int = 0
    wall_time: float = 0.0


class SolverError(RuntimeError):
    pass
