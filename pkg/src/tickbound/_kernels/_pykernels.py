"""Pure-Python graph kernels.

Every function takes the CSR form of an automaton (``ptr``, ``evt``,
``dst``: outgoing transitions of state ``q`` live at ``ptr[q]:ptr[q+1]``,
sorted by event index) and returns plain Python lists.  The compiled
module ``_ckernels`` implements the same signatures.
"""

UNREACHABLE = -1
UNBOUNDED = -2


def _lists(*arrays):
    return [a.tolist() if hasattr(a, "tolist") else list(a) for a in arrays]


def reach_mask(ptr, dst, init, alive):
    ptr, dst, alive = _lists(ptr, dst, alive)
    n = len(ptr) - 1
    seen = [0] * n
    if init < 0 or not alive[init]:
        return seen
    seen[init] = 1
    stack = [init]
    while stack:
        q = stack.pop()
        for k in range(ptr[q], ptr[q + 1]):
            r = dst[k]
            if alive[r] and not seen[r]:
                seen[r] = 1
                stack.append(r)
    return seen


def _reverse(ptr, dst, n):
    rptr = [0] * (n + 1)
    for r in dst:
        rptr[r + 1] += 1
    for i in range(n):
        rptr[i + 1] += rptr[i]
    fill = rptr[:-1]
    rsrc = [0] * len(dst)
    for q in range(n):
        for k in range(ptr[q], ptr[q + 1]):
            r = dst[k]
            rsrc[fill[r]] = q
            fill[r] += 1
    return rptr, rsrc


def coreach_mask(ptr, dst, marked, alive):
    ptr, dst, marked, alive = _lists(ptr, dst, marked, alive)
    n = len(ptr) - 1
    rptr, rsrc = _reverse(ptr, dst, n)
    seen = [0] * n
    stack = []
    for q in range(n):
        if marked[q] and alive[q]:
            seen[q] = 1
            stack.append(q)
    while stack:
        r = stack.pop()
        for k in range(rptr[r], rptr[r + 1]):
            q = rsrc[k]
            if alive[q] and not seen[q]:
                seen[q] = 1
                stack.append(q)
    return seen


def counter_expand(ptr, evt, dst, marked, tick, budget, init, lifo):
    """Counter-automaton construction over (state, ticks-since-marking) pairs.

    Returns ``(base, depth, tsrc, tevt, tdst, dropped)``; counter state ``i``
    is ``(base[i], depth[i])``.  ``dropped`` lists ``(src_id, event,
    dst_base, d)`` for every transition cut because ``d`` exceeded ``budget``.
    """
    ptr, evt, dst, marked = _lists(ptr, evt, dst, marked)
    ids = {}
    base, depth = [], []
    tsrc, tevt, tdst, dropped = [], [], [], []

    def visit(x, d):
        key = (x, d)
        i = ids.get(key)
        if i is None:
            i = ids[key] = len(base)
            base.append(x)
            depth.append(d)
            work.append(i)
        return i

    work = []
    visit(init, 0)
    head = 0
    while (work if lifo else head < len(work)):
        if lifo:
            i = work.pop()
        else:
            i = work[head]
            head += 1
        x, d = base[i], depth[i]
        src_marked = marked[x]
        for k in range(ptr[x], ptr[x + 1]):
            e, y = evt[k], dst[k]
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
            j = visit(y, nd)
            tsrc.append(i)
            tevt.append(e)
            tdst.append(j)
    return base, depth, tsrc, tevt, tdst, dropped


def tick_longest(ptr, evt, dst, tick, target, alive):
    """Longest tick-weighted path from each state to its first target hit.

    Edges leaving target states are ignored.  Result per state:
    0 on targets, ``UNREACHABLE`` if no target is reachable (or the state is
    not alive), ``UNBOUNDED`` if a cycle is reachable on the way, else the
    maximum number of ticks over all first-entry paths.
    """
    ptr, evt, dst, target, alive = _lists(ptr, evt, dst, target, alive)
    n = len(ptr) - 1
    can = coreach_mask_first_entry(ptr, dst, target, alive, n)
    best = [UNREACHABLE] * n
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for q in range(n):
        if can[q] and target[q]:
            best[q] = 0
            color[q] = 2
    for root in range(n):
        if not can[root] or color[root]:
            continue
        color[root] = 1
        stack = [(root, ptr[root])]
        acc = {root: 0}
        while stack:
            q, k = stack[-1]
            end = ptr[q + 1]
            descended = False
            while k < end:
                r = dst[k]
                if can[r]:
                    if color[r] == 1:
                        acc[q] = UNBOUNDED
                    elif color[r] == 0:
                        stack[-1] = (q, k + 1)
                        color[r] = 1
                        acc[r] = 0
                        stack.append((r, ptr[r]))
                        descended = True
                        break
                    else:
                        _relax(acc, q, best[r], evt[k] == tick)
                k += 1
            if descended:
                continue
            stack.pop()
            best[q] = acc.pop(q)
            color[q] = 2
            if stack:
                p, pk = stack[-1]
                _relax(acc, p, best[q], evt[pk - 1] == tick)
    return best


def _relax(acc, q, value, is_tick):
    if acc[q] == UNBOUNDED:
        return
    if value == UNBOUNDED:
        acc[q] = UNBOUNDED
        return
    v = value + (1 if is_tick else 0)
    if v > acc[q]:
        acc[q] = v


def coreach_mask_first_entry(ptr, dst, target, alive, n):
    """States (alive) that reach a target without passing through one."""
    rptr = [0] * (n + 1)
    for q in range(n):
        if target[q] or not alive[q]:
            continue
        for k in range(ptr[q], ptr[q + 1]):
            rptr[dst[k] + 1] += 1
    for i in range(n):
        rptr[i + 1] += rptr[i]
    fill = rptr[:-1]
    rsrc = [0] * rptr[n]
    for q in range(n):
        if target[q] or not alive[q]:
            continue
        for k in range(ptr[q], ptr[q + 1]):
            r = dst[k]
            rsrc[fill[r]] = q
            fill[r] += 1
    seen = [0] * n
    stack = [q for q in range(n) if target[q] and alive[q]]
    for q in stack:
        seen[q] = 1
    while stack:
        r = stack.pop()
        for k in range(rptr[r], rptr[r + 1]):
            q = rsrc[k]
            if alive[q] and not seen[q]:
                seen[q] = 1
                stack.append(q)
    return seen
