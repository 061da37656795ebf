"""Normal forms for K_n, the amalgam L_n, and the word problem in H_n.

K_n = <x1..xn | x1^2 = ... = xn^2> has unique normal forms
x_{i1}...x_{ik} x_n^z with adjacent indices distinct and i_k != n.
L_n = H_n / <w_n> is an amalgamated free product A *_Z B of free
products of order-2 cyclic groups, where the amalgamated subgroup is
generated by x1...xr = xn...x_{r+1}; its elements have unique normal
forms u^p s1 t1 ... s_l t_l over length-lex least coset representatives.
H_n itself is decided through L_n plus the central element w_n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import GeneratorAlphabet, GroupWord, parse_word


def x_alphabet(n: int) -> GeneratorAlphabet:
    return GeneratorAlphabet(tuple(f"x{i}" for i in range(1, n + 1)))


def _as_word(w: GroupWord | str, n: int) -> GroupWord:
    if isinstance(w, str):
        return parse_word(w, x_alphabet(n))
    return w


# --- K_n ------------------------------------------------------------------


@dataclass(frozen=True)
class KnNormalForm:
    """x_{i1}...x_{ik} x_n^z; indices are 1-based, i_k != n."""

    n: int
    indices: tuple[int, ...]
    zpow: int

    @property
    def is_identity(self) -> bool:
        return not self.indices and self.zpow == 0


def kn_normalize(w: GroupWord | str, n: int) -> KnNormalForm:
    """Rewrite a word in K_n to its unique normal form.

    Every even power of x_j equals the same power of the central x_n^2,
    so single letters accumulate on an index stack with the cancellation
    x_i x_i -> x_n^2, and x_n powers move to the right.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    w = _as_word(w, n)
    indices: list[int] = []
    zpow = 0
    for gen, sign in w.single_letters():
        i = gen + 1
        if sign < 0:
            # x_i^-1 = x_i x_n^-2
            zpow -= 2
        if indices and indices[-1] == i:
            indices.pop()
            zpow += 2
        else:
            indices.append(i)
    if indices and indices[-1] == n:
        indices.pop()
        zpow += 1
    return KnNormalForm(n=n, indices=tuple(indices), zpow=zpow)


def kn_concat(a: KnNormalForm, b: KnNormalForm) -> KnNormalForm:
    """Product of normal forms, renormalized."""
    if a.n != b.n:
        raise ValueError("mismatched n")
    n = a.n
    indices = list(a.indices)
    zpow = a.zpow + b.zpow
    tail = list(b.indices)
    if a.zpow % 2:
        # only x_n^2 is central, so an odd x_n power from the left factor
        # leaves one x_n stuck at the interface before b's letters
        tail.insert(0, n)
        zpow -= 1
    for i in tail:
        if indices and indices[-1] == i:
            indices.pop()
            zpow += 2
        else:
            indices.append(i)
    if indices and indices[-1] == n:
        indices.pop()
        zpow += 1
    return KnNormalForm(n=n, indices=tuple(indices), zpow=zpow)


# --- free products of C2's and the coset transversal ----------------------


def c2_concat(seq: tuple[int, ...], tail: tuple[int, ...]) -> tuple[int, ...]:
    """Multiply alternating index sequences with the rules x_i^2 = 1."""
    out = list(seq)
    for i in tail:
        if out and out[-1] == i:
            out.pop()
        else:
            out.append(i)
    return tuple(out)


def coset_rep(seq: tuple[int, ...], r: int, base: int = 0) -> tuple[int, tuple[int, ...]]:
    """Length-lex least representative of the right coset U * seq.

    The factor is the free product of C2's on indices base+1..base+r and
    U is generated by u = x_{base+1}...x_{base+r}.  Returns (upow, rep)
    with seq = u^upow * rep.  Candidates u^-k * seq with r*|k| beyond
    2*len(seq)+r are strictly longer than seq, so a finite scan is exact.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    u = tuple(range(base + 1, base + r + 1))
    uinv = tuple(reversed(u))
    bound = (2 * len(seq)) // r + 2
    best = None
    for k in range(-bound, bound + 1):
        cand = seq
        step = uinv if k > 0 else u
        for _ in range(abs(k)):
            cand = c2_concat(step, cand)
        key = (len(cand), cand)
        if best is None or key < best[0]:
            best = (key, k, cand)
    _, upow, rep = best
    return upow, rep


# --- the amalgam L_n --------------------------------------------------------


@dataclass(frozen=True)
class AmalgamNormalForm:
    """u^upow s1 t1 ... s_l t_l; syllables alternate A- and B-factors.

    Each syllable is (factor, indices) with factor 'A' or 'B'; all are
    non-trivial coset representatives except possibly the first and last.
    """

    n: int
    r: int
    upow: int
    syllables: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def is_identity(self) -> bool:
        return self.upow == 0 and not self.syllables


def _b_rep(seq: tuple[int, ...], n: int, r: int) -> tuple[int, tuple[int, ...]]:
    """Coset transversal for B = <x_{r+1}..x_n>, via y_i = x_{n-i+1}.

    In L_n the amalgamated generator embeds into B as x_n x_{n-1} ... x_{r+1},
    which is y_1 ... y_{n-r} under the relabeling.
    """
    relabel = {i: n - i + 1 for i in range(1, n - r + 1)}
    yseq = tuple(n - i + 1 for i in seq)
    upow, yrep = coset_rep(yseq, n - r)
    return upow, tuple(relabel[i] for i in yrep)


def ln_normalize(w: GroupWord | str, n: int, r: int | None = None) -> AmalgamNormalForm:
    """Unique amalgam normal form of a word in L_n (split point r).

    w is the identity in L_n iff upow == 0 and there are no syllables.
    """
    if r is None:
        r = n // 2
    if not 2 <= r <= n - 2:
        raise ValueError(f"need 2 <= r <= n-2, got r={r}, n={n}")
    w = _as_word(w, n)
    # x_i^2 = 1: only exponent parity matters
    flat = [gen + 1 for gen, _ in w.single_letters()]
    # maximal alternating blocks of A-letters (<= r) and B-letters (> r)
    blocks: list[tuple[str, list[int]]] = []
    for i in flat:
        factor = "A" if i <= r else "B"
        if blocks and blocks[-1][0] == factor:
            blocks[-1][1].append(i)
        else:
            blocks.append((factor, [i]))

    syllables = [(f, c2_concat((), tuple(seq))) for f, seq in blocks]
    upow = 0
    changed = True
    while changed:
        changed = False
        # drop trivial syllables and merge equal neighbours
        merged: list[tuple[str, tuple[int, ...]]] = []
        for factor, seq in syllables:
            if not seq:
                changed = True
                continue
            if merged and merged[-1][0] == factor:
                merged[-1] = (factor, c2_concat(merged[-1][1], seq))
                changed = True
            else:
                merged.append((factor, seq))
        syllables = merged
        # pull U-powers leftward, replacing syllables by coset reps
        for pos in range(len(syllables) - 1, -1, -1):
            factor, seq = syllables[pos]
            if factor == "A":
                k, rep = coset_rep(seq, r)
            else:
                k, rep = _b_rep(seq, n, r)
            if k == 0 and rep == seq:
                continue
            changed = True
            syllables[pos] = (factor, rep)
            if pos == 0:
                upow += k
            else:
                # push u^k into the left neighbour as letters of its factor
                lf, lseq = syllables[pos - 1]
                u_word = tuple(range(1, r + 1)) if lf == "A" else tuple(range(n, r, -1))
                add = lseq
                step = u_word if k > 0 else tuple(reversed(u_word))
                for _ in range(abs(k)):
                    add = c2_concat(add, step)
                syllables[pos - 1] = (lf, add)
    return AmalgamNormalForm(n=n, r=r, upow=upow, syllables=tuple(syllables))


# --- H_n word problem -------------------------------------------------------


def hn_is_identity(w: GroupWord | str, n: int, budget: int = 200000) -> str:
    """Decide w = 1 in H_n: 'identity' | 'not-identity' | 'unknown'.

    A nontrivial image in L_n (split r = n // 2) certifies not-identity.
    Otherwise w lies in the central <w_n>; for n = 4 the exact power is
    read off via the polycyclic isomorphism, while for n >= 5 a bounded
    breadth-first search over relator consequences looks for a reduction
    to the empty word.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    w = _as_word(w, n)
    if not ln_normalize(w, n).is_identity:
        return "not-identity"
    if n == 4:
        from .h4 import psi_eval

        return "identity" if psi_eval(w).is_identity else "not-identity"
    return _relator_search(w, n, budget)


def _relator_search(w: GroupWord, n: int, budget: int) -> str:
    """BFS over insertions of H_n relator conjugates, seeking the empty word."""
    alphabet = w.alphabet
    relators: list[GroupWord] = []
    wn = GroupWord(alphabet, tuple((i, 1) for i in range(n)))
    for i in range(n):
        # x_i^2 = w_n
        rel = GroupWord(alphabet, ((i, -2),)) * wn
        relators.extend([rel, rel.inverse()])
    start = w.single_letters()
    if not start:
        return "identity"
    seen = {start}
    frontier = [start]
    spent = 0
    while frontier and spent < budget:
        nxt = []
        for flat in frontier:
            for pos in range(len(flat) + 1):
                for rel in relators:
                    cand = GroupWord(
                        alphabet, flat[:pos] + rel.letters + flat[pos:]
                    ).single_letters()
                    if len(cand) > len(start) + n + 2 or cand in seen:
                        continue
                    spent += 1
                    if not cand:
                        return "identity"
                    seen.add(cand)
                    nxt.append(cand)
                    if spent >= budget:
                        return "unknown"
        frontier = nxt
    return "unknown"
