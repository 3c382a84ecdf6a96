# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; same signatures as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()

ctypedef long long i64
ctypedef unsigned char u8

UNREACHABLE = -1
UNBOUNDED = -2

cdef i64 C_UNREACHABLE = -1
cdef i64 C_UNBOUNDED = -2


def reach_mask(const i64[:] ptr, const i64[:] dst, i64 init, const u8[:] alive):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    seen_arr = np.zeros(n, dtype=np.uint8)
    cdef u8[:] seen = seen_arr
    if init < 0 or not alive[init]:
        return seen_arr
    cdef i64* stack = <i64*> malloc((n + 1) * sizeof(i64))
    cdef Py_ssize_t top = 0
    cdef i64 q, r, k
    seen[init] = 1
    stack[top] = init
    top += 1
    while top > 0:
        top -= 1
        q = stack[top]
        for k in range(ptr[q], ptr[q + 1]):
            r = dst[k]
            if alive[r] and not seen[r]:
                seen[r] = 1
                stack[top] = r
                top += 1
    free(stack)
    return seen_arr


cdef _reverse(const i64[:] ptr, const i64[:] dst, Py_ssize_t n, const u8[:] skip_src):
    rptr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef i64[:] rptr = rptr_arr
    cdef i64 q, k, r
    for q in range(n):
        if skip_src is not None and skip_src[q]:
            continue
        for k in range(ptr[q], ptr[q + 1]):
            rptr[dst[k] + 1] += 1
    for q in range(n):
        rptr[q + 1] += rptr[q]
    fill_arr = rptr_arr[:-1].copy()
    cdef i64[:] fill = fill_arr
    rsrc_arr = np.zeros(rptr[n], dtype=np.int64)
    cdef i64[:] rsrc = rsrc_arr
    for q in range(n):
        if skip_src is not None and skip_src[q]:
            continue
        for k in range(ptr[q], ptr[q + 1]):
            r = dst[k]
            rsrc[fill[r]] = q
            fill[r] += 1
    return rptr_arr, rsrc_arr


cdef _backward(Py_ssize_t n, i64[:] rptr, i64[:] rsrc, const u8[:] seeds, const u8[:] alive):
    seen_arr = np.zeros(n, dtype=np.uint8)
    cdef u8[:] seen = seen_arr
    cdef i64* stack = <i64*> malloc((n + 1) * sizeof(i64))
    cdef Py_ssize_t top = 0
    cdef i64 q, r, k
    for q in range(n):
        if seeds[q] and alive[q]:
            seen[q] = 1
            stack[top] = q
            top += 1
    while top > 0:
        top -= 1
        r = stack[top]
        for k in range(rptr[r], rptr[r + 1]):
            q = rsrc[k]
            if alive[q] and not seen[q]:
                seen[q] = 1
                stack[top] = q
                top += 1
    free(stack)
    return seen_arr


def coreach_mask(const i64[:] ptr, const i64[:] dst, const u8[:] marked, const u8[:] alive):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    rptr, rsrc = _reverse(ptr, dst, n, None)
    return _backward(n, rptr, rsrc, marked, alive)


def coreach_mask_first_entry(const i64[:] ptr, const i64[:] dst, const u8[:] target, const u8[:] alive, Py_ssize_t n):
    cdef Py_ssize_t q
    skip_arr = np.zeros(n, dtype=np.uint8)
    cdef u8[:] skip = skip_arr
    for q in range(n):
        skip[q] = 1 if (target[q] or not alive[q]) else 0
    rptr, rsrc = _reverse(ptr, dst, n, skip)
    return _backward(n, rptr, rsrc, target, alive)


def counter_expand(const i64[:] ptr, const i64[:] evt, const i64[:] dst, const u8[:] marked,
                   i64 tick, i64 budget, i64 init, bint lifo):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef i64 width = budget + 1
    # dense id table when it fits, dict otherwise (huge budgets)
    cdef bint dense = n * width <= (1 << 24)
    cdef i64[:] ids
    lookup = {}
    if dense:
        ids_arr = np.full(max(n * width, 1), -1, dtype=np.int64)
        ids = ids_arr
    cdef Py_ssize_t cap = 64
    cdef i64* work = <i64*> malloc(cap * sizeof(i64))
    cdef i64* grown
    cdef Py_ssize_t top = 0, head = 0
    base = []
    depth = []
    tsrc = []
    tevt = []
    tdst = []
    dropped = []
    cdef i64 i, j, x, d, k, e, y, nd, key, count = 0
    cdef bint src_marked

    if dense:
        ids[init * width] = 0
    else:
        lookup[init * width] = 0
    base.append(init)
    depth.append(0)
    count = 1
    work[top] = 0
    top += 1
    while (top > 0) if lifo else (head < top):
        if lifo:
            top -= 1
            i = work[top]
        else:
            i = work[head]
            head += 1
        x = base[i]
        d = depth[i]
        src_marked = marked[x]
        for k in range(ptr[x], ptr[x + 1]):
            e = evt[k]
            y = dst[k]
            if src_marked:
                nd = 0
            else:
                if e == tick:
                    nd = d + 1
                elif marked[y]:
                    nd = 0
                else:
                    nd = d
                if nd > budget:
                    dropped.append((i, e, y, nd))
                    continue
                if marked[y]:
                    nd = 0
            key = y * width + nd
            if dense:
                j = ids[key]
            else:
                j = lookup.get(key, -1)
            if j < 0:
                j = count
                count += 1
                if dense:
                    ids[key] = j
                else:
                    lookup[key] = j
                base.append(y)
                depth.append(nd)
                if top >= cap:
                    cap *= 2
                    grown = <i64*> realloc(work, cap * sizeof(i64))
                    if grown == NULL:
                        free(work)
                        raise MemoryError()
                    work = grown
                work[top] = j
                top += 1
            tsrc.append(i)
            tevt.append(e)
            tdst.append(j)
    free(work)
    return base, depth, tsrc, tevt, tdst, dropped


def tick_longest(const i64[:] ptr, const i64[:] evt, const i64[:] dst, i64 tick,
                 const u8[:] target, const u8[:] alive):
    cdef Py_ssize_t n = ptr.shape[0] - 1
    can_arr = coreach_mask_first_entry(ptr, dst, target, alive, n)
    cdef u8[:] can = can_arr
    best_arr = np.full(n, C_UNREACHABLE, dtype=np.int64)
    cdef i64[:] best = best_arr
    acc_arr = np.zeros(n, dtype=np.int64)
    cdef i64[:] acc = acc_arr
    color_arr = np.zeros(n, dtype=np.uint8)
    cdef u8[:] color = color_arr
    cdef i64* sq = <i64*> malloc((n + 1) * sizeof(i64))
    cdef i64* sk = <i64*> malloc((n + 1) * sizeof(i64))
    cdef Py_ssize_t top
    cdef i64 root, q, k, r, p, end, v
    cdef bint descended
    for q in range(n):
        if can[q] and target[q]:
            best[q] = 0
            color[q] = 2
    for root in range(n):
        if not can[root] or color[root]:
            continue
        color[root] = 1
        acc[root] = 0
        top = 0
        sq[top] = root
        sk[top] = ptr[root]
        top += 1
        while top > 0:
            q = sq[top - 1]
            k = sk[top - 1]
            end = ptr[q + 1]
            descended = False
            while k < end:
                r = dst[k]
                if can[r]:
                    if color[r] == 1:
                        acc[q] = C_UNBOUNDED
                    elif color[r] == 0:
                        sk[top - 1] = k + 1
                        color[r] = 1
                        acc[r] = 0
                        sq[top] = r
                        sk[top] = ptr[r]
                        top += 1
                        descended = True
                        break
                    else:
                        _relax(acc, q, best[r], evt[k] == tick)
                k += 1
            if descended:
                continue
            top -= 1
            best[q] = acc[q]
            color[q] = 2
            if top > 0:
                p = sq[top - 1]
                _relax(acc, p, best[q], evt[sk[top - 1] - 1] == tick)
    free(sq)
    free(sk)
    return best_arr


cdef inline void _relax(i64[:] acc, i64 q, i64 value, bint is_tick) noexcept:
    cdef i64 v
    if acc[q] == C_UNBOUNDED:
        return
    if value == C_UNBOUNDED:
        acc[q] = C_UNBOUNDED
        return
    v = value + (1 if is_tick else 0)
    if v > acc[q]:
        acc[q] = v
