"""CDCL SAT solving: embedded solver, external process bridge, AllSAT.

The embedded solver is a conflict-driven clause learner with two-watched
literal propagation, first-UIP learning, VSIDS branching with phase
saving, Luby restarts and activity-based learned-clause reduction.
Every model is checked against the clause list before being surfaced.
"""

from __future__ import annotations

import heapq
import os
import subprocess
import tempfile
import time
from .encode import CnfInstance, parse_model, write_dimacs
from .solver_types import SolveResult, SolverError

SOLVER_ENV_VAR = "UNITLAB_SOLVER"

try:  # the numba kernel is optional; this class is the reference
    from ._accel import NativeCdclSolver

    HAVE_NATIVE = True
except ImportError:  # pragma: no cover
    NativeCdclSolver = None
    HAVE_NATIVE = False


def _check_model(clauses, model) -> bool:
    return all(
        any(model.get(abs(l), False) == (l > 0) for l in clause) for clause in clauses
    )


def _luby(i: int) -> int:
    """The Luby restart sequence 1,1,2,1,1,2,4,... at 1-based index i."""
    x = i - 1
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x %= size
    return 1 << seq


class CdclSolver:
    """Embedded CDCL solver over a fixed clause set."""

    def __init__(self, num_vars: int, clauses, seed: int = 0):
        self.n = num_vars
        self.values = [0] * (num_vars + 1)  # 0 unassigned, 1 true, -1 false
        self.level = [0] * (num_vars + 1)
        self.reason = [None] * (num_vars + 1)
        self.saved_phase = [False] * (num_vars + 1)
        self.activity = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: dict[int, list] = {}
        self.clauses: list[list[int]] = []
        self.learned: list[list[int]] = []
        self.conflicts = 0
        self.decisions = 0
        self.ok = True
        # mild seed-dependent tie-breaking so enumeration counts can be
        # cross-checked under different branching orders
        for v in range(1, num_vars + 1):
            self.activity[v] = ((v * 1103515245 + seed) % 997) * 1e-9
            heapq.heappush(self.heap, (-self.activity[v], v))
        for clause in clauses:
            if not self.add_clause(list(clause)):
                self.ok = False
                return

    # -- clause management --

    def add_clause(self, lits: list[int], learned: bool = False) -> bool:
        if not learned:
            lits = sorted(set(lits), key=abs)
            if any(-l in lits for l in lits):
                return True  # tautology
            if any(self._value(l) == 1 for l in lits):
                return True  # satisfied at root level
            lits = [l for l in lits if self._value(l) != -1]
            if not lits:
                return False
        if len(lits) == 1:
            return self._assign(lits[0], None)
        (self.learned if learned else self.clauses).append(lits)
        self.watches.setdefault(lits[0], []).append(lits)
        self.watches.setdefault(lits[1], []).append(lits)
        return True

    def _value(self, lit: int) -> int:
        v = self.values[lit] if lit > 0 else -self.values[-lit]
        return v

    def _assign(self, lit: int, reason) -> bool:
        var = abs(lit)
        val = 1 if lit > 0 else -1
        if self.values[var]:
            return self.values[var] == val
        self.values[var] = val
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.saved_phase[var] = lit > 0
        self.trail.append(lit)
        return True

    def _propagate(self):
        # the hot loop: locals shadow attributes and assignment is inlined
        values = self.values
        trail = self.trail
        watches = self.watches
        level = self.level
        reason = self.reason
        saved = self.saved_phase
        lvl = len(self.trail_lim)
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            ws = watches.get(false_lit)
            if not ws:
                continue
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                fv = values[first] if first > 0 else -values[-first]
                if fv == 1:
                    ws[j] = c
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    other = c[k]
                    if (values[other] if other > 0 else -values[-other]) != -1:
                        c[1] = other
                        c[k] = false_lit
                        wo = watches.get(other)
                        if wo is None:
                            watches[other] = [c]
                        else:
                            wo.append(c)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = c
                j += 1
                if fv == -1:
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return c
                var = first if first > 0 else -first
                values[var] = 1 if first > 0 else -1
                level[var] = lvl
                reason[var] = c
                saved[var] = first > 0
                trail.append(first)
            del ws[j:]
        return None

    # -- VSIDS --

    def _bump(self, var: int):
        self.activity[var] += self.var_inc
        if self.activity[var] > 1e100:
            for v in range(1, self.n + 1):
                self.activity[v] *= 1e-100
            self.var_inc *= 1e-100
        heapq.heappush(self.heap, (-self.activity[var], var))

    def _decide(self) -> int:
        while self.heap:
            act, var = heapq.heappop(self.heap)
            if self.values[var] == 0 and -act == self.activity[var]:
                return var if self.saved_phase[var] else -var
        for var in range(1, self.n + 1):
            if self.values[var] == 0:
                return var if self.saved_phase[var] else -var
        return 0

    # -- conflict analysis --

    def _analyze(self, confl):
        learnt = [0]
        seen = [False] * (self.n + 1)
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        while True:
            for q in confl:
                if p != 0 and abs(q) == abs(p):
                    continue
                var = abs(q)
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    self._bump(var)
                    if self.level[var] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = -self.trail[idx]
            var = abs(p)
            seen[var] = False
            counter -= 1
            if counter == 0:
                break
            confl = self.reason[var]
            idx -= 1
        learnt[0] = p
        if len(learnt) == 1:
            return learnt, 0
        # non-recursive minimization: drop q when its reason clause lies
        # entirely inside the learnt clause (seen) or at root level
        levels = self.level
        reasons = self.reason
        kept = [p]
        for q in learnt[1:]:
            r = reasons[-q if q < 0 else q]
            if r is not None and all(
                seen[x if x > 0 else -x] or levels[x if x > 0 else -x] == 0
                for x in r
                if x != q and x != -q
            ):
                continue
            kept.append(q)
        learnt = kept
        if len(learnt) == 1:
            return learnt, 0
        back_level = max(self.level[abs(q)] for q in learnt[1:])
        # put a literal of back_level in the second watch position
        for i in range(1, len(learnt)):
            if self.level[abs(learnt[i])] == back_level:
                learnt[1], learnt[i] = learnt[i], learnt[1]
                break
        return learnt, back_level

    def _backtrack(self, level: int):
        if len(self.trail_lim) <= level:
            return
        limit = self.trail_lim[level]
        values = self.values
        reason = self.reason
        activity = self.activity
        heap = self.heap
        push = heapq.heappush
        for lit in self.trail[limit:]:
            var = lit if lit > 0 else -lit
            values[var] = 0
            reason[var] = None
            push(heap, (-activity[var], var))
        del self.trail[limit:]
        del self.trail_lim[level:]
        self.qhead = limit

    def _reduce_db(self):
        self.learned.sort(key=len)
        keep, drop = [], []
        half = len(self.learned) // 2
        locked = {id(self.reason[abs(l)]) for l in self.trail if self.reason[abs(l)]}
        for i, c in enumerate(self.learned):
            if i < half or len(c) <= 2 or id(c) in locked:
                keep.append(c)
            else:
                drop.append(c)
        dropped = {id(c) for c in drop}
        for c in drop:
            for w in (c[0], c[1]):
                lst = self.watches.get(w)
                if lst:
                    self.watches[w] = [cl for cl in lst if id(cl) not in dropped]
        self.learned = keep

    def solve(self, conflict_limit: int = 10**7, time_limit: float = 3600.0) -> SolveResult:
        start = time.monotonic()
        if not self.ok:
            return SolveResult("unsat", conflicts=0, decisions=0)
        confl = self._propagate()
        if confl is not None:
            return SolveResult("unsat", wall_time=time.monotonic() - start)
        restart_count = 0
        max_learned = 4000
        while True:
            budget = 128 * _luby(restart_count + 1)
            restart_count += 1
            done = 0
            while done < budget:
                confl = self._propagate()
                if confl is not None:
                    self.conflicts += 1
                    done += 1
                    if not self.trail_lim:
                        return SolveResult(
                            "unsat", conflicts=self.conflicts,
                            decisions=self.decisions,
                            wall_time=time.monotonic() - start,
                        )
                    learnt, back = self._analyze(confl)
                    self._backtrack(back)
                    if len(learnt) == 1:
                        self._assign(learnt[0], None)
                    else:
                        self.add_clause(learnt, learned=True)
                        self._assign(learnt[0], learnt)
                    self.var_inc /= 0.95
                    if (
                        self.conflicts & 255 == 0
                        and time.monotonic() - start > time_limit
                    ):
                        return SolveResult(
                            "timeout", conflicts=self.conflicts,
                            decisions=self.decisions,
                            wall_time=time.monotonic() - start,
                        )
                    if self.conflicts >= conflict_limit:
                        return SolveResult(
                            "timeout", conflicts=self.conflicts,
                            decisions=self.decisions,
                            wall_time=time.monotonic() - start,
                        )
                    if len(self.learned) > max_learned:
                        self._reduce_db()
                        max_learned += 500
                else:
                    if self.conflicts % 64 == 0 and time.monotonic() - start > time_limit:
                        return SolveResult(
                            "timeout", conflicts=self.conflicts,
                            decisions=self.decisions,
                            wall_time=time.monotonic() - start,
                        )
                    lit = self._decide()
                    if lit == 0:
                        model = {v: self.values[v] > 0 for v in range(1, self.n + 1)}
                        return SolveResult(
                            "sat", model=model, conflicts=self.conflicts,
                            decisions=self.decisions,
                            wall_time=time.monotonic() - start,
                        )
                    self.decisions += 1
                    self.trail_lim.append(len(self.trail))
                    self._assign(lit, None)
            self._backtrack(0)


# --- public API ---------------------------------------------------------------


def solve(
    inst: CnfInstance,
    backend: str = "embedded",
    solver_path: str | None = None,
    conflict_limit: int = 10**7,
    time_limit: float = 3600.0,
    seed: int = 0,
) -> SolveResult:
    """Solve an instance; models are re-verified before being returned."""
    if backend == "embedded":
        cls = NativeCdclSolver if HAVE_NATIVE else CdclSolver
        result = cls(inst.num_vars, inst.clauses, seed=seed).solve(
            conflict_limit, time_limit
        )
    elif backend == "external":
        result = _solve_external(inst, solver_path, time_limit)
    else:
        raise SolverError(f"unknown backend {backend!r}")
    if result.status == "sat":
        if not _check_model(inst.clauses, result.model):
            raise SolverError("solver returned a model violating the clauses")
    return result


def _solve_external(inst: CnfInstance, solver_path, time_limit: float) -> SolveResult:
    path = solver_path or os.environ.get(SOLVER_ENV_VAR)
    if not path:
        raise SolverError(
            f"no external solver configured (use --solver-path or ${SOLVER_ENV_VAR})"
        )
    start = time.monotonic()
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as fh:
        write_dimacs(inst, fh)
        cnf_file = fh.name
    try:
        proc = subprocess.run(
            [path, cnf_file], capture_output=True, text=True, timeout=time_limit
        )
    except FileNotFoundError:
        raise SolverError(f"external solver not found: {path}") from None
    except subprocess.TimeoutExpired:
        return SolveResult("timeout", wall_time=time.monotonic() - start)
    finally:
        os.unlink(cnf_file)
    elapsed = time.monotonic() - start
    status = None
    for line in proc.stdout.splitlines():
        if line.startswith("s "):
            answer = line[2:].strip().upper()
            if answer == "SATISFIABLE":
                status = "sat"
            elif answer == "UNSATISFIABLE":
                status = "unsat"
    if status is None:
        if proc.returncode == 10:
            status = "sat"
        elif proc.returncode == 20:
            status = "unsat"
        else:
            raise SolverError(
                f"external solver gave no answer (exit {proc.returncode}): "
                f"{proc.stderr[:500]}"
            )
    if status == "sat":
        model = parse_model(proc.stdout)
        return SolveResult("sat", model=model, wall_time=elapsed)
    return SolveResult("unsat", wall_time=elapsed)


def projection_vars(inst: CnfInstance, roles=("u", "v")) -> list[int]:
    out = []
    for role in roles:
        vars_ = inst.varmap.get(role)
        if vars_:
            out.extend(vars_)
    return sorted(set(out))


def enumerate_all(
    inst: CnfInstance,
    roles=("u", "v"),
    backend: str = "embedded",
    solver_path: str | None = None,
    conflict_limit: int = 10**7,
    time_limit: float = 3600.0,
    seed: int = 0,
):
    """All models projected onto the coefficient variables.

    Returns (assignments, complete): a deterministically sorted,
    duplicate-free list of projected assignments (tuples of true/false
    per projection variable) and a completeness flag; on limit
    exhaustion the partial list is returned with complete = False.
    """
    proj = projection_vars(inst, roles)
    clauses = list(inst.clauses)
    found: list[tuple[bool, ...]] = []
    deadline = time.monotonic() + time_limit
    while True:
        work = CnfInstance(inst.num_vars, clauses, inst.varmap, inst.metadata,
                           ball=inst.ball, elements=inst.elements)
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return sorted(found), False
        result = solve(work, backend=backend, solver_path=solver_path,
                       conflict_limit=conflict_limit, time_limit=remaining,
                       seed=seed)
        if result.status == "timeout":
            return sorted(found), False
        if result.status == "unsat":
            return sorted(found), True
        assignment = tuple(bool(result.model.get(v)) for v in proj)
        found.append(assignment)
        blocking = tuple(
            -v if value else v for v, value in zip(proj, assignment)
        )
        clauses.append(blocking)
