"""Pure-Python edit-distance and block-shift kernels.

Same interface as the compiled ``_kernels`` extension; used as a fallback
when the extension is not built. Sequences are lists of ints (token ids);
callers intern tokens before calling in.
"""

from __future__ import annotations

BACKEND = "pure-python"

# Guard for the exhaustive search: the visited table covers every string
# over the remapped alphabet up to the hypothesis length.
_MAX_EXHAUSTIVE_STATES = 1 << 22


def levenshtein_ints(a: list[int], b: list[int]) -> int:
    """Unit-cost edit distance between two token-id sequences."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    row = list(range(lb + 1))
    for i in range(1, la + 1):
        prev = row[0]
        row[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            tmp = row[j]
            cur = prev if ai == b[j - 1] else prev + 1
            if row[j] + 1 < cur:
                cur = row[j] + 1
            if row[j - 1] + 1 < cur:
                cur = row[j - 1] + 1
            row[j] = cur
            prev = tmp
    return row[lb]


def _is_ref_span(span: tuple[int, ...], ref: list[int]) -> bool:
    n, m = len(span), len(ref)
    for s in range(m - n + 1):
        if tuple(ref[s : s + n]) == span:
            return True
    return False


def _shift(seq: list[int], i: int, j: int, k: int) -> list[int]:
    """Move seq[i:j] so it starts at position k of the remainder."""
    span = seq[i:j]
    rest = seq[:i] + seq[j:]
    return rest[:k] + span + rest[k:]


def _legal_shifts(cur: list[int], ref: list[int]):
    """Yield all single block shifts whose span matches some reference span.

    Scan order (i asc, j asc, k asc) is the tie-breaking contract of the
    greedy search. Spans that do not occur in the reference prune all
    longer spans at the same start.
    """
    n = len(cur)
    for i in range(n):
        for j in range(i + 1, n + 1):
            if not _is_ref_span(tuple(cur[i:j]), ref):
                break
            for k in range(n - (j - i) + 1):
                if k == i:
                    continue
                yield i, j, k


def ter_greedy_ints(hyp: list[int], ref: list[int]) -> tuple[int, int]:
    """Greedy shift search; returns (total_edits, shifts_applied).

    Each iteration applies the single legal shift that most reduces the
    edit distance (first such shift in scan order on ties) and stops when
    no shift strictly reduces it.
    """
    cur = list(hyp)
    shifts = 0
    cur_lev = levenshtein_ints(cur, ref)
    while cur_lev > 0:
        best_lev = cur_lev
        best_move = None
        for i, j, k in _legal_shifts(cur, ref):
            cand = _shift(cur, i, j, k)
            c = levenshtein_ints(cand, ref)
            if c < best_lev:
                best_lev = c
                best_move = (i, j, k)
        if best_move is None:
            break
        cur = _shift(cur, *best_move)
        shifts += 1
        cur_lev = best_lev
    return shifts + cur_lev, shifts


def ter_optimal_ints(hyp: list[int], ref: list[int]) -> int:
    """Minimum shifts + edit distance over all legal shift sequences.

    Breadth-first search over hypothesis reorderings; exponential in
    general, intended for short sequences (oracle use). Raises ValueError
    when the state space would exceed the guard.
    """
    if not hyp:
        return len(ref)
    alphabet = {}
    h = [alphabet.setdefault(t, len(alphabet)) for t in hyp]
    sentinel = len(alphabet)
    r = [alphabet.get(t, sentinel) for t in ref]
    radix = sentinel + 1
    nstates = radix ** len(h)
    if nstates > _MAX_EXHAUSTIVE_STATES:
        raise ValueError(
            "exhaustive shift search limited to %d states, got %d"
            % (_MAX_EXHAUSTIVE_STATES, nstates)
        )

    start = tuple(h)
    best = levenshtein_ints(h, r)
    visited = {start}
    frontier = [start]
    depth = 0
    while frontier and depth + 1 < best:
        depth += 1
        nxt = []
        for state in frontier:
            cur = list(state)
            for i, j, k in _legal_shifts(cur, r):
                cand = tuple(_shift(cur, i, j, k))
                if cand in visited:
                    continue
                visited.add(cand)
                total = depth + levenshtein_ints(list(cand), r)
                if total < best:
                    best = total
                nxt.append(cand)
        frontier = nxt
    return best
