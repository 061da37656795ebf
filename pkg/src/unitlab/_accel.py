"""Array-based CDCL kernel compiled with numba.

This mirrors the pure-Python solver: two watched literals, first-UIP
learning with non-recursive minimization, VSIDS on an indexed binary
heap, phase saving, Luby restarts and length-based clause reduction.
All state lives in flat numpy arrays owned by the wrapper; the kernel
runs in conflict-bounded chunks so the caller keeps wall-clock control.
If an arena fills up the wrapper restarts the search with doubled
capacity (learned clauses are dropped, counters are kept).
"""

from __future__ import annotations

import time

import numpy as np
from numba import njit

from .solver_types import SolveResult

# scalar slots
S_QHEAD, S_TRAIL, S_TLIM, S_CONFLICTS, S_DECISIONS, S_RESTARTS = 0, 1, 2, 3, 4, 5
S_BUDGET, S_DBTOP, S_POOLTOP, S_HEAPSIZE, S_MAXLEARN, S_NCLAUSES = 6, 7, 8, 9, 10, 11
S_NLEARNED = 12

PAUSE, SAT, UNSAT, FULL = 0, 1, 2, 3


@njit(cache=True)
def _luby(i):
    x = i - 1
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x = x % size
    return 1 << seq


@njit(cache=True)
def _heap_up(heap, hpos, act, i):
    v = heap[i]
    a = act[v]
    while i > 0:
        parent = (i - 1) >> 1
        pv = heap[parent]
        if act[pv] >= a:
            break
        heap[i] = pv
        hpos[pv] = i
        i = parent
    heap[i] = v
    hpos[v] = i


@njit(cache=True)
def _heap_down(heap, hpos, act, size, i):
    v = heap[i]
    a = act[v]
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        best = left
        right = left + 1
        if right < size and act[heap[right]] > act[heap[left]]:
            best = right
        bv = heap[best]
        if act[bv] <= a:
            break
        heap[i] = bv
        hpos[bv] = i
        i = best
    heap[i] = v
    hpos[v] = i


@njit(cache=True)
def _heap_insert(heap, hpos, act, S, v):
    if hpos[v] >= 0:
        return
    i = S[S_HEAPSIZE]
    heap[i] = v
    hpos[v] = i
    S[S_HEAPSIZE] = i + 1
    _heap_up(heap, hpos, act, i)


@njit(cache=True)
def _lit_index(lit):
    return 2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1


@njit(cache=True)
def _watch_add(lit_idx, off, wstart, wcnt, wcap, wpool, S):
    cnt = wcnt[lit_idx]
    cap = wcap[lit_idx]
    if cnt == cap:
        new_cap = 8 if cap == 0 else 2 * cap
        top = S[S_POOLTOP]
        if top + new_cap > wpool.shape[0]:
            return False
        start = wstart[lit_idx]
        for k in range(cnt):
            wpool[top + k] = wpool[start + k]
        wstart[lit_idx] = top
        wcap[lit_idx] = new_cap
        S[S_POOLTOP] = top + new_cap
    wpool[wstart[lit_idx] + cnt] = off
    wcnt[lit_idx] = cnt + 1
    return True


@njit(cache=True)
def _reduce_db(n, db, coff, clearned, calive, reason, trail,
               wstart, wcnt, wcap, wpool, S):
    ncl = S[S_NCLAUSES]
    # reason clauses of current assignments are locked
    for t in range(S[S_TRAIL]):
        lit = trail[t]
        var = lit if lit > 0 else -lit
        r = reason[var]
        if r >= 0:
            calive[db[r + 1]] = 2
    sizes = np.empty(ncl, np.int32)
    ids = np.empty(ncl, np.int32)
    cnt = 0
    for cid in range(ncl):
        if clearned[cid] == 1 and calive[cid] == 1:
            sizes[cnt] = db[coff[cid]]
            ids[cnt] = cid
            cnt += 1
    order = np.argsort(sizes[:cnt])
    dropped = 0
    for t in range(cnt // 2, cnt):
        cid = ids[order[t]]
        if db[coff[cid]] > 2:
            calive[cid] = 0
            dropped += 1
    for cid in range(ncl):
        if calive[cid] == 2:
            calive[cid] = 1
    # compact the clause arena so the db top stays bounded; compute the
    # new offsets first, remap reason pointers, then slide blocks left
    newoff = np.empty(ncl, np.int64)
    top = np.int64(0)
    for cid in range(ncl):
        if calive[cid] == 0:
            continue
        newoff[cid] = top
        top += db[coff[cid]] + 2
    for t in range(S[S_TRAIL]):
        lit = trail[t]
        var = lit if lit > 0 else -lit
        r = reason[var]
        if r >= 0:
            reason[var] = newoff[db[r + 1]]
    newtop = np.int64(0)
    ncid = 0
    for cid in range(ncl):
        if calive[cid] == 0:
            continue
        off = coff[cid]
        size = db[off]
        if newtop != off:
            for k in range(size + 2):
                db[newtop + k] = db[off + k]
        db[newtop + 1] = ncid
        coff[ncid] = newtop
        clearned[ncid] = clearned[cid]
        calive[ncid] = 1
        newtop += size + 2
        ncid += 1
    S[S_DBTOP] = newtop
    S[S_NCLAUSES] = ncid
    # rebuild the watch lists into a defragmented pool
    for li in range(2 * n):
        wcnt[li] = 0
        wcap[li] = 0
        wstart[li] = 0
    S[S_POOLTOP] = 0
    for cid in range(ncid):
        off = coff[cid]
        _watch_add(_lit_index(db[off + 2]), off, wstart, wcnt, wcap, wpool, S)
        _watch_add(_lit_index(db[off + 3]), off, wstart, wcnt, wcap, wpool, S)
    S[S_NLEARNED] -= dropped
    S[S_MAXLEARN] += 500


@njit(cache=True)
def _run(
    n, chunk_limit,
    db, coff, clearned, calive,
    values, level, reason, saved, act, heap, hpos,
    trail, tlim, seen, learnt, clearbuf,
    wstart, wcnt, wcap, wpool,
    S, F,
):
    """Advance the search; returns PAUSE, SAT, UNSAT, or FULL."""
    processed = 0
    while True:
        # -- propagate --------------------------------------------------
        confl = np.int64(-1)
        lvl = S[S_TLIM]
        while S[S_QHEAD] < S[S_TRAIL]:
            lit = trail[S[S_QHEAD]]
            S[S_QHEAD] += 1
            false_lit = -lit
            fidx = _lit_index(false_lit)
            ws = wstart[fidx]
            i = 0
            j = 0
            end = wcnt[fidx]
            while i < end:
                off = wpool[ws + i]
                i += 1
                size = db[off]
                base = off + 2
                if db[base] == false_lit:
                    db[base] = db[base + 1]
                    db[base + 1] = false_lit
                first = db[base]
                fv = values[first] if first > 0 else -values[-first]
                if fv == 1:
                    wpool[ws + j] = off
                    j += 1
                    continue
                moved = False
                for k in range(2, size):
                    other = db[base + k]
                    ov = values[other] if other > 0 else -values[-other]
                    if ov != -1:
                        if not _watch_add(_lit_index(other), off,
                                          wstart, wcnt, wcap, wpool, S):
                            # undo nothing: clause is still watched here
                            wpool[ws + j] = off
                            j += 1
                            while i < end:
                                wpool[ws + j] = wpool[ws + i]
                                j += 1
                                i += 1
                            wcnt[fidx] = j
                            return FULL
                        db[base + 1] = other
                        db[base + k] = false_lit
                        ws = wstart[fidx]  # pool may have relocated lists
                        moved = True
                        break
                if moved:
                    continue
                wpool[ws + j] = off
                j += 1
                if fv == -1:
                    while i < end:
                        wpool[ws + j] = wpool[ws + i]
                        j += 1
                        i += 1
                    wcnt[fidx] = j
                    S[S_QHEAD] = S[S_TRAIL]
                    confl = off
                    break
                var = first if first > 0 else -first
                values[var] = 1 if first > 0 else -1
                level[var] = lvl
                reason[var] = off
                saved[var] = 1 if first > 0 else 0
                trail[S[S_TRAIL]] = first
                S[S_TRAIL] += 1
            if confl >= 0:
                break
            wcnt[fidx] = j

        if confl >= 0:
            # -- conflict ----------------------------------------------
            S[S_CONFLICTS] += 1
            processed += 1
            if S[S_TLIM] == 0:
                return UNSAT
            # capacity preflight for the learnt clause
            if (S[S_DBTOP] + n + 3 > db.shape[0]
                    or S[S_NCLAUSES] + 1 > coff.shape[0]):
                return FULL
            # first-UIP analysis
            lsize = 1
            nclear = 0
            counter = 0
            p = 0
            idx = S[S_TRAIL] - 1
            cur = S[S_TLIM]
            c = confl
            while True:
                csize = db[c]
                cbase = c + 2
                for k in range(csize):
                    q = db[cbase + k]
                    if p != 0 and (q == p or q == -p):
                        continue
                    v = q if q > 0 else -q
                    if seen[v] == 0 and level[v] > 0:
                        seen[v] = 1
                        clearbuf[nclear] = v
                        nclear += 1
                        act[v] += F[0]
                        if act[v] > 1e100:
                            for w in range(1, n + 1):
                                act[w] *= 1e-100
                            F[0] *= 1e-100
                        if hpos[v] >= 0:
                            _heap_up(heap, hpos, act, hpos[v])
                        if level[v] >= cur:
                            counter += 1
                        else:
                            learnt[lsize] = q
                            lsize += 1
                while True:
                    tv = trail[idx]
                    tvar = tv if tv > 0 else -tv
                    if seen[tvar] != 0:
                        break
                    idx -= 1
                p = -trail[idx]
                pvar = p if p > 0 else -p
                seen[pvar] = 0
                counter -= 1
                if counter == 0:
                    break
                c = reason[pvar]
                idx -= 1
            learnt[0] = p
            # minimization: drop literals whose reason clause lies inside
            # the learnt clause (or at root level)
            kept = 1
            for t in range(1, lsize):
                q = learnt[t]
                qvar = q if q > 0 else -q
                r = reason[qvar]
                redundant = False
                if r >= 0:
                    redundant = True
                    rsize = db[r]
                    rbase = r + 2
                    for k in range(rsize):
                        x = db[rbase + k]
                        if x == q or x == -q:
                            continue
                        xvar = x if x > 0 else -x
                        if seen[xvar] == 0 and level[xvar] != 0:
                            redundant = False
                            break
                if not redundant:
                    learnt[kept] = q
                    kept += 1
            lsize = kept
            for t in range(nclear):
                seen[clearbuf[t]] = 0
            back = 0
            if lsize > 1:
                for t in range(1, lsize):
                    q = learnt[t]
                    ql = level[q if q > 0 else -q]
                    if ql > back:
                        back = ql
                for t in range(1, lsize):
                    q = learnt[t]
                    if level[q if q > 0 else -q] == back:
                        tmp = learnt[1]
                        learnt[1] = learnt[t]
                        learnt[t] = tmp
                        break
            # backtrack(back)
            limit = tlim[back]
            for t in range(limit, S[S_TRAIL]):
                lit = trail[t]
                var = lit if lit > 0 else -lit
                values[var] = 0
                reason[var] = -1
                _heap_insert(heap, hpos, act, S, var)
            S[S_TRAIL] = limit
            S[S_TLIM] = back
            S[S_QHEAD] = limit
            # install the asserting clause
            pvar = p if p > 0 else -p
            if lsize == 1:
                values[pvar] = 1 if p > 0 else -1
                level[pvar] = 0
                reason[pvar] = -1
                saved[pvar] = 1 if p > 0 else 0
                trail[S[S_TRAIL]] = p
                S[S_TRAIL] += 1
            else:
                top = S[S_DBTOP]
                cid = S[S_NCLAUSES]
                db[top] = lsize
                db[top + 1] = cid
                for t in range(lsize):
                    db[top + 2 + t] = learnt[t]
                coff[cid] = top
                clearned[cid] = 1
                calive[cid] = 1
                S[S_NCLAUSES] = cid + 1
                S[S_NLEARNED] += 1
                S[S_DBTOP] = top + lsize + 2
                if not _watch_add(_lit_index(learnt[0]), top,
                                  wstart, wcnt, wcap, wpool, S):
                    return FULL
                if not _watch_add(_lit_index(learnt[1]), top,
                                  wstart, wcnt, wcap, wpool, S):
                    return FULL
                values[pvar] = 1 if p > 0 else -1
                level[pvar] = S[S_TLIM]
                reason[pvar] = top
                saved[pvar] = 1 if p > 0 else 0
                trail[S[S_TRAIL]] = p
                S[S_TRAIL] += 1
            F[0] /= 0.95
            S[S_BUDGET] -= 1
            if S[S_NLEARNED] > S[S_MAXLEARN]:
                _reduce_db(n, db, coff, clearned, calive, reason, trail,
                           wstart, wcnt, wcap, wpool, S)
            if S[S_BUDGET] <= 0:
                if S[S_TLIM] > 0:
                    limit = tlim[0]
                    for t in range(limit, S[S_TRAIL]):
                        lit = trail[t]
                        var = lit if lit > 0 else -lit
                        values[var] = 0
                        reason[var] = -1
                        _heap_insert(heap, hpos, act, S, var)
                    S[S_TRAIL] = limit
                    S[S_TLIM] = 0
                    S[S_QHEAD] = limit
                S[S_RESTARTS] += 1
                S[S_BUDGET] = 128 * _luby(S[S_RESTARTS] + 1)
            if processed >= chunk_limit:
                return PAUSE
        else:
            # -- decide ------------------------------------------------
            var = 0
            while S[S_HEAPSIZE] > 0:
                v = heap[0]
                last = S[S_HEAPSIZE] - 1
                heap[0] = heap[last]
                hpos[heap[0]] = 0
                hpos[v] = -1
                S[S_HEAPSIZE] = last
                if last > 0:
                    _heap_down(heap, hpos, act, last, 0)
                if values[v] == 0:
                    var = v
                    break
            if var == 0:
                return SAT
            S[S_DECISIONS] += 1
            tlim[S[S_TLIM]] = S[S_TRAIL]
            S[S_TLIM] += 1
            lit = var if saved[var] == 1 else -var
            values[var] = 1 if lit > 0 else -1
            level[var] = S[S_TLIM]
            reason[var] = -1
            trail[S[S_TRAIL]] = lit
            S[S_TRAIL] += 1


class NativeCdclSolver:
    """Drop-in replacement for the pure-Python CdclSolver."""

    def __init__(self, num_vars: int, clauses, seed: int = 0):
        self.n = num_vars
        self.seed = seed
        self.ok = True
        self.conflicts = 0
        self.decisions = 0
        self._base_conflicts = 0
        self._base_decisions = 0
        self._scale = 1

        # root-level preprocessing mirrors CdclSolver.add_clause
        kept: list[list[int]] = []
        units: list[int] = []
        root: dict[int, int] = {}
        for clause in clauses:
            lits = sorted(set(clause), key=abs)
            if any(-l in lits for l in lits):
                continue
            if len(lits) == 1:
                units.append(lits[0])
            else:
                kept.append(lits)
        for u in units:
            if root.get(abs(u), u) != u:
                self.ok = False
            root[abs(u)] = u
        if self.ok:
            changed = True
            while changed and self.ok:
                changed = False
                next_kept = []
                for lits in kept:
                    if any(root.get(abs(l)) == l for l in lits):
                        continue
                    lits = [l for l in lits if root.get(abs(l)) != -l]
                    if not lits:
                        self.ok = False
                        break
                    if len(lits) == 1:
                        u = lits[0]
                        if root.get(abs(u), u) != u:
                            self.ok = False
                            break
                        if abs(u) not in root:
                            root[abs(u)] = u
                            changed = True
                    else:
                        next_kept.append(lits)
                kept = next_kept
        self._kept = kept
        self._root = root
        if self.ok:
            self._build()

    def _alloc_bytes(self) -> int:
        total = sum(len(c) + 2 for c in self._kept)
        db = self._scale * max(8 * total + 1024, 1 << 16)
        pool = self._scale * max(32 * total + 2048, 1 << 16)
        ncl = self._scale * max(8 * len(self._kept) + 1024, 1 << 14)
        return 4 * (db + pool) + 10 * ncl

    def _build(self):
        n = self.n
        kept = self._kept
        self._values = np.zeros(n + 1, np.int8)
        self._level = np.zeros(n + 1, np.int32)
        self._reason = np.full(n + 1, -1, np.int64)
        self._saved = np.zeros(n + 1, np.int8)
        self._act = np.zeros(n + 1, np.float64)
        self._heap = np.zeros(n + 1, np.int32)
        self._hpos = np.full(n + 1, -1, np.int32)
        self._trail = np.zeros(n + 2, np.int32)
        self._tlim = np.zeros(n + 2, np.int32)
        self._seen = np.zeros(n + 1, np.uint8)
        self._learnt = np.zeros(n + 2, np.int32)
        self._clearbuf = np.zeros(n + 2, np.int32)
        self._S = np.zeros(16, np.int64)
        self._F = np.array([1.0], np.float64)
        self._S[S_BUDGET] = 128
        self._S[S_MAXLEARN] = 4000

        # same seed-dependent tie-breaking as the reference solver
        for v in range(1, n + 1):
            self._act[v] = ((v * 1103515245 + self.seed) % 997) * 1e-9
        order = sorted(range(1, n + 1), key=lambda v: -self._act[v])
        for i, v in enumerate(order):
            self._heap[i] = v
            self._hpos[v] = i
        self._S[S_HEAPSIZE] = n

        total = sum(len(c) + 2 for c in kept)
        scale = self._scale
        self._db = np.zeros(scale * max(8 * total + 1024, 1 << 16), np.int32)
        cap_clauses = scale * max(8 * len(kept) + 1024, 1 << 14)
        self._coff = np.zeros(cap_clauses, np.int64)
        self._clearned = np.zeros(cap_clauses, np.uint8)
        self._calive = np.zeros(cap_clauses, np.uint8)
        self._wstart = np.zeros(2 * n, np.int64)
        self._wcnt = np.zeros(2 * n, np.int32)
        self._wcap = np.zeros(2 * n, np.int32)
        self._wpool = np.zeros(scale * max(32 * total + 2048, 1 << 16), np.int32)

        top = 0
        for cid, lits in enumerate(kept):
            self._coff[cid] = top
            self._calive[cid] = 1
            self._db[top] = len(lits)
            self._db[top + 1] = cid
            for t, lit in enumerate(lits):
                self._db[top + 2 + t] = lit
            top += len(lits) + 2
        self._S[S_DBTOP] = top
        self._S[S_NCLAUSES] = len(kept)
        for cid, lits in enumerate(kept):
            for lit in lits[:2]:
                _watch_add(
                    _lit_index(lit), self._coff[cid], self._wstart,
                    self._wcnt, self._wcap, self._wpool, self._S,
                )
        for var, lit in self._root.items():
            self._values[var] = 1 if lit > 0 else -1
            self._trail[self._S[S_TRAIL]] = lit
            self._S[S_TRAIL] += 1

    def solve(self, conflict_limit: int = 10**7,
              time_limit: float = 3600.0) -> SolveResult:
        start = time.monotonic()
        if not self.ok:
            return SolveResult("unsat", conflicts=0, decisions=0)
        while True:
            done = self._base_conflicts + self._S[S_CONFLICTS]
            if time.monotonic() - start > time_limit or done >= conflict_limit:
                return self._result("timeout", start)
            chunk = min(4096, conflict_limit - done)
            status = _run(
                self.n, chunk,
                self._db, self._coff, self._clearned, self._calive,
                self._values, self._level, self._reason, self._saved,
                self._act, self._heap, self._hpos,
                self._trail, self._tlim, self._seen, self._learnt,
                self._clearbuf,
                self._wstart, self._wcnt, self._wcap, self._wpool,
                self._S, self._F,
            )
            if status == SAT:
                model = {v: bool(self._values[v] > 0)
                         for v in range(1, self.n + 1)}
                return self._result("sat", start, model)
            if status == UNSAT:
                return self._result("unsat", start)
            if status == FULL:
                # arenas filled mid-operation; restart with more room,
                # but stay within a fixed memory budget
                self._base_conflicts += int(self._S[S_CONFLICTS])
                self._base_decisions += int(self._S[S_DECISIONS])
                self._scale *= 2
                if self._alloc_bytes() > 1 << 31:
                    return self._result("timeout", start)
                self._build()

    def _result(self, status, start, model=None) -> SolveResult:
        self.conflicts = self._base_conflicts + int(self._S[S_CONFLICTS])
        self.decisions = self._base_decisions + int(self._S[S_DECISIONS])
        return SolveResult(
            status, model=model, conflicts=self.conflicts,
            decisions=self.decisions, wall_time=time.monotonic() - start,
        )
