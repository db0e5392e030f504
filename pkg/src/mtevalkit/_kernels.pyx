# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance and block-shift kernels.

Mirrors `_ter_py` function for function (same scan order, same results);
the pure-Python module is the readable reference, this one is the fast
path for corpus-scale TER and the exhaustive oracle sweep.
"""

from libc.stdlib cimport calloc, free, malloc
from libc.string cimport memcpy

BACKEND = "cython"

cdef long MAX_EXHAUSTIVE_STATES = 4194304  # 1 << 22


cdef int _lev(const int* a, int la, const int* b, int lb, int* row) noexcept nogil:
    """Unit-cost edit distance; `row` is scratch of lb + 1 ints."""
    cdef int i, j, cur, prev, tmp, ai
    if la == 0:
        return lb
    if lb == 0:
        return la
    for j in range(lb + 1):
        row[j] = j
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


cdef bint _is_ref_span(const int* span, int n, const int* ref, int m) noexcept nogil:
    cdef int s, t
    for s in range(m - n + 1):
        for t in range(n):
            if ref[s + t] != span[t]:
                break
        else:
            return True
    return False


cdef void _shift(const int* src, int n, int i, int j, int k, int* dst) noexcept nogil:
    """Move src[i:j) so it starts at position k of the remainder."""
    cdef int s = j - i, p, q = 0
    # remainder prefix
    for p in range(n):
        if i <= p < j:
            continue
        if q == k:
            break
        dst[q] = src[p]
        q += 1
    memcpy(dst + k, src + i, s * sizeof(int))
    q = k + s
    cdef int seen = 0
    for p in range(n):
        if i <= p < j:
            continue
        if seen >= k:
            dst[q] = src[p]
            q += 1
        seen += 1


cdef int* _to_buf(list seq) except NULL:
    cdef int n = len(seq)
    cdef int* buf = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef int i
    for i in range(n):
        buf[i] = seq[i]
    return buf


def levenshtein_ints(list a, list b):
    """Unit-cost edit distance between two token-id sequences."""
    cdef int la = len(a), lb = len(b)
    cdef int* ab = _to_buf(a)
    cdef int* bb
    cdef int* row
    cdef int result
    try:
        bb = _to_buf(b)
    except:
        free(ab)
        raise
    row = <int*> malloc((lb + 1) * sizeof(int))
    if row == NULL:
        free(ab)
        free(bb)
        raise MemoryError()
    result = _lev(ab, la, bb, lb, row)
    free(ab)
    free(bb)
    free(row)
    return result


def ter_greedy_ints(list hyp, list ref):
    """Greedy shift search; returns (total_edits, shifts_applied)."""
    cdef int lh = len(hyp), lr = len(ref)
    cdef int* cur = _to_buf(hyp)
    cdef int* refb = _to_buf(ref)
    cdef int* cand = <int*> malloc((lh if lh > 0 else 1) * sizeof(int))
    cdef int* best_buf = <int*> malloc((lh if lh > 0 else 1) * sizeof(int))
    cdef int* row = <int*> malloc((lr + 1) * sizeof(int))
    if cand == NULL or best_buf == NULL or row == NULL:
        free(cur); free(refb); free(cand); free(best_buf); free(row)
        raise MemoryError()

    cdef int shifts = 0
    cdef int cur_lev, best_lev, c
    cdef int i, j, k, span_len
    cdef bint found
    with nogil:
        cur_lev = _lev(cur, lh, refb, lr, row)
        while cur_lev > 0:
            best_lev = cur_lev
            found = False
            for i in range(lh):
                for j in range(i + 1, lh + 1):
                    span_len = j - i
                    if not _is_ref_span(cur + i, span_len, refb, lr):
                        break
                    for k in range(lh - span_len + 1):
                        if k == i:
                            continue
                        _shift(cur, lh, i, j, k, cand)
                        c = _lev(cand, lh, refb, lr, row)
                        if c < best_lev:
                            best_lev = c
                            memcpy(best_buf, cand, lh * sizeof(int))
                            found = True
            if not found:
                break
            memcpy(cur, best_buf, lh * sizeof(int))
            shifts += 1
            cur_lev = best_lev

    free(cur); free(refb); free(cand); free(best_buf); free(row)
    return shifts + cur_lev, shifts


def ter_optimal_ints(list hyp, list ref):
    """Minimum shifts + edit distance over all legal shift sequences.

    Breadth-first search over hypothesis reorderings, visited-states table
    indexed by packing the remapped sequence in base (|hyp alphabet| + 1).
    """
    cdef int lh = len(hyp), lr = len(ref)
    cdef int i, j, k, p, span_len
    if lh == 0:
        return lr

    # Remap hypothesis tokens to 0..V-1, reference-only tokens to V.
    mapping = {}
    h_list = [mapping.setdefault(t, len(mapping)) for t in hyp]
    cdef int sentinel = len(mapping)
    r_list = [mapping.get(t, sentinel) for t in ref]
    cdef long radix = sentinel + 1
    cdef long nstates = 1
    for i in range(lh):
        nstates *= radix
        if nstates > MAX_EXHAUSTIVE_STATES:
            raise ValueError(
                "exhaustive shift search limited to %d states, got > %d"
                % (MAX_EXHAUSTIVE_STATES, MAX_EXHAUSTIVE_STATES)
            )

    cdef int* h = _to_buf(h_list)
    cdef int* r = _to_buf(r_list)
    cdef int* row = <int*> malloc((lr + 1) * sizeof(int))
    cdef char* visited = <char*> calloc(nstates, sizeof(char))
    cdef long* queue = <long*> malloc(nstates * sizeof(long))
    cdef int* cur = <int*> malloc(lh * sizeof(int))
    cdef int* cand = <int*> malloc(lh * sizeof(int))
    if row == NULL or visited == NULL or queue == NULL or cur == NULL or cand == NULL:
        free(h); free(r); free(row); free(visited); free(queue); free(cur); free(cand)
        raise MemoryError()

    cdef long head = 0, tail = 0, level_end, packed, code
    cdef int best, depth, total
    with nogil:
        best = _lev(h, lh, r, lr, row)
        packed = 0
        for i in range(lh - 1, -1, -1):
            packed = packed * radix + h[i]
        visited[packed] = 1
        queue[tail] = packed
        tail += 1
        depth = 0
        while head < tail and depth + 1 < best:
            depth += 1
            level_end = tail
            while head < level_end:
                code = queue[head]
                head += 1
                for i in range(lh):
                    cur[i] = <int> (code % radix)
                    code //= radix
                for i in range(lh):
                    for j in range(i + 1, lh + 1):
                        span_len = j - i
                        if not _is_ref_span(cur + i, span_len, r, lr):
                            break
                        for k in range(lh - span_len + 1):
                            if k == i:
                                continue
                            _shift(cur, lh, i, j, k, cand)
                            packed = 0
                            for p in range(lh - 1, -1, -1):
                                packed = packed * radix + cand[p]
                            if visited[packed]:
                                continue
                            visited[packed] = 1
                            queue[tail] = packed
                            tail += 1
                            total = depth + _lev(cand, lh, r, lr, row)
                            if total < best:
                                best = total

    free(h); free(r); free(row); free(visited); free(queue); free(cur); free(cand)
    return best
