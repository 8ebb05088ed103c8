"""Pure-Python graph kernels over integer-encoded transition tables.

A transition table is a C-contiguous int32 matrix of shape (n_states,
n_events). Entries: a target state index, -1 for "event in the alphabet but
undefined here", -2 for "event not in this automaton's alphabet" (used only
by product alignment, where it means the component does not participate).

The compiled twin in ``_ckernels.pyx`` mirrors these functions statement for
statement; both must produce identical arrays, including discovery order
(FIFO breadth-first, events scanned in ascending column order), so results
never depend on the selected backend.
"""

from __future__ import annotations

from collections import deque

import numpy as np

BACKEND = "pure-python"


def reachable(trans: np.ndarray, initial: int) -> np.ndarray:
    """Indices of states reachable from ``initial``, in BFS discovery order."""
    n, m = trans.shape
    seen = np.zeros(n, dtype=np.uint8)
    order = []
    queue = deque([initial])
    seen[initial] = 1
    while queue:
        s = queue.popleft()
        order.append(s)
        row = trans[s]
        for e in range(m):
            t = row[e]
            if t >= 0 and not seen[t]:
                seen[t] = 1
                queue.append(t)
    return np.array(order, dtype=np.int32)


def coreachable(trans: np.ndarray, marked: np.ndarray) -> np.ndarray:
    """Mask of states from which some marked state is reachable."""
    n, m = trans.shape
    # reverse adjacency, flattened
    counts = np.zeros(n + 1, dtype=np.int64)
    for s in range(n):
        row = trans[s]
        for e in range(m):
            t = row[e]
            if t >= 0:
                counts[t + 1] += 1
    offsets = np.cumsum(counts)
    rev = np.empty(offsets[-1], dtype=np.int32)
    fill = offsets[:-1].copy()
    for s in range(n):
        row = trans[s]
        for e in range(m):
            t = row[e]
            if t >= 0:
                rev[fill[t]] = s
                fill[t] += 1
    mask = np.zeros(n, dtype=np.uint8)
    queue = deque()
    for s in range(n):
        if marked[s]:
            mask[s] = 1
            queue.append(s)
    while queue:
        t = queue.popleft()
        for k in range(offsets[t], offsets[t + 1]):
            s = rev[k]
            if not mask[s]:
                mask[s] = 1
                queue.append(s)
    return mask


def product_pair(ta: np.ndarray, tb: np.ndarray, ia: int, ib: int):
    """Accessible synchronous product of two aligned transition tables.

    Returns (pa, pb, tp): component indices and the composed table, states
    numbered in discovery order with the start pair first.
    """
    m = ta.shape[1]
    pair_id: dict[tuple[int, int], int] = {(ia, ib): 0}
    pa = [ia]
    pb = [ib]
    rows: list[list[int]] = []
    k = 0
    while k < len(pa):
        i = pa[k]
        j = pb[k]
        ra = ta[i]
        rb = tb[j]
        row = [-1] * m
        for e in range(m):
            x = ra[e]
            y = rb[e]
            if x == -2:
                if y == -2:
                    row[e] = -2
                    continue
                if y < 0:
                    continue
                ni, nj = i, y
            elif y == -2:
                if x < 0:
                    continue
                ni, nj = x, j
            else:
                if x < 0 or y < 0:
                    continue
                ni, nj = x, y
            key = (ni, nj)
            t = pair_id.get(key)
            if t is None:
                t = len(pa)
                pair_id[key] = t
                pa.append(ni)
                pb.append(nj)
            row[e] = t
        rows.append(row)
        k += 1
    tp = np.array(rows, dtype=np.int32).reshape(len(pa), m)
    return (np.array(pa, dtype=np.int32), np.array(pb, dtype=np.int32), tp)


def subset_project(trans: np.ndarray, initial: int, marked: np.ndarray,
                   keep: np.ndarray):
    """Subset construction that erases the events not flagged in ``keep``.

    Returns (tp, pmarked, members_off, members): the deterministic projected
    table over the kept columns (in their original relative order), the
    marked flags, and the subset contents as a flattened index array.
    """
    n, m = trans.shape
    kept = [e for e in range(m) if keep[e]]
    erased = [e for e in range(m) if not keep[e]]

    def closure(seed: list[int]) -> tuple[int, ...]:
        seen = set(seed)
        stack = list(seed)
        while stack:
            s = stack.pop()
            row = trans[s]
            for e in erased:
                t = row[e]
                if t >= 0 and t not in seen:
                    seen.add(t)
                    stack.append(t)
        return tuple(sorted(seen))

    start = closure([initial])
    subset_id: dict[tuple[int, ...], int] = {start: 0}
    subsets = [start]
    rows = []
    k = 0
    while k < len(subsets):
        cur = subsets[k]
        row = [-1] * len(kept)
        for col, e in enumerate(kept):
            seed = []
            for s in cur:
                t = trans[s][e]
                if t >= 0:
                    seed.append(int(t))
            if not seed:
                continue
            nxt = closure(sorted(set(seed)))
            t_id = subset_id.get(nxt)
            if t_id is None:
                t_id = len(subsets)
                subset_id[nxt] = t_id
                subsets.append(nxt)
            row[col] = t_id
        rows.append(row)
        k += 1
    count = len(subsets)
    tp = np.array(rows, dtype=np.int32).reshape(count, len(kept))
    pmarked = np.zeros(count, dtype=np.uint8)
    members_off = np.zeros(count + 1, dtype=np.int64)
    total = 0
    for idx, sub in enumerate(subsets):
        total += len(sub)
        members_off[idx + 1] = total
        for s in sub:
            if marked[s]:
                pmarked[idx] = 1
                break
    members = np.empty(total, dtype=np.int32)
    pos = 0
    for sub in subsets:
        for s in sub:
            members[pos] = s
            pos += 1
    return tp, pmarked, members_off, members


def refine_partition(trans: np.ndarray, status: np.ndarray):
    """Coarsest refinement of ``status`` stable under a total table.

    Classes are renumbered by first occurrence in state order on every
    round, so the result is canonical. Returns (class_of, n_classes).
    """
    n, m = trans.shape
    class_of = [0] * n
    remap: dict[int, int] = {}
    for s in range(n):
        key = int(status[s])
        c = remap.get(key)
        if c is None:
            c = len(remap)
            remap[key] = c
        class_of[s] = c
    n_classes = len(remap)
    while True:
        sig_id: dict[tuple[int, ...], int] = {}
        new_class = [0] * n
        for s in range(n):
            row = trans[s]
            sig = [class_of[s]]
            for e in range(m):
                sig.append(class_of[row[e]])
            key = tuple(sig)
            c = sig_id.get(key)
            if c is None:
                c = len(sig_id)
                sig_id[key] = c
            new_class[s] = c
        if len(sig_id) == n_classes:
            return np.array(new_class, dtype=np.int32), n_classes
        n_classes = len(sig_id)
        class_of = new_class
