# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pykernels``.

Same functions, same discovery orders, same arrays; only faster. Any change
here must be mirrored in ``_pykernels.py`` and is guarded by the backend
parity tests.
"""

from collections import deque

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t

BACKEND = "compiled"


def reachable(trans, int initial):
    cdef const int32_t[:, ::1] tr = np.ascontiguousarray(trans, dtype=np.int32)
    cdef Py_ssize_t n = tr.shape[0]
    cdef Py_ssize_t m = tr.shape[1]
    cdef uint8_t[::1] seen = np.zeros(n, dtype=np.uint8)
    out = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] order = out
    queue = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] q = queue
    cdef Py_ssize_t head = 0, tail = 0, cnt = 0
    cdef int32_t s, t
    cdef Py_ssize_t e
    seen[initial] = 1
    q[tail] = initial
    tail += 1
    while head < tail:
        s = q[head]
        head += 1
        order[cnt] = s
        cnt += 1
        for e in range(m):
            t = tr[s, e]
            if t >= 0 and not seen[t]:
                seen[t] = 1
                q[tail] = t
                tail += 1
    return out[:cnt].copy()


def coreachable(trans, marked):
    cdef const int32_t[:, ::1] tr = np.ascontiguousarray(trans, dtype=np.int32)
    cdef const uint8_t[::1] mk = np.ascontiguousarray(marked, dtype=np.uint8)
    cdef Py_ssize_t n = tr.shape[0]
    cdef Py_ssize_t m = tr.shape[1]
    counts_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef Py_ssize_t s, e
    cdef int32_t t
    for s in range(n):
        for e in range(m):
            t = tr[s, e]
            if t >= 0:
                counts[t + 1] += 1
    offsets_arr = np.cumsum(counts_arr)
    cdef int64_t[::1] offsets = offsets_arr
    rev_arr = np.empty(offsets_arr[n], dtype=np.int32)
    cdef int32_t[::1] rev = rev_arr
    fill_arr = offsets_arr[:n].copy()
    cdef int64_t[::1] fill = fill_arr
    for s in range(n):
        for e in range(m):
            t = tr[s, e]
            if t >= 0:
                rev[fill[t]] = s
                fill[t] += 1
    out = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] mask = out
    queue = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] q = queue
    cdef Py_ssize_t head = 0, tail = 0
    cdef int64_t k
    for s in range(n):
        if mk[s]:
            mask[s] = 1
            q[tail] = s
            tail += 1
    cdef int32_t u
    while head < tail:
        t = q[head]
        head += 1
        for k in range(offsets[t], offsets[t + 1]):
            u = rev[k]
            if not mask[u]:
                mask[u] = 1
                q[tail] = u
                tail += 1
    return out


def product_pair(ta, tb, int ia, int ib):
    cdef const int32_t[:, ::1] a = np.ascontiguousarray(ta, dtype=np.int32)
    cdef const int32_t[:, ::1] b = np.ascontiguousarray(tb, dtype=np.int32)
    cdef Py_ssize_t m = a.shape[1]
    pair_id = {(ia, ib): 0}
    pa = [ia]
    pb = [ib]
    rows = []
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t e
    cdef int32_t x, y
    cdef int i, j, ni, nj
    cdef object key, t
    while k < len(pa):
        i = pa[k]
        j = pb[k]
        row = np.full(m, -1, dtype=np.int32)
        rowv_arr = row
        for e in range(m):
            x = a[i, e]
            y = b[j, e]
            if x == -2:
                if y == -2:
                    rowv_arr[e] = -2
                    continue
                if y < 0:
                    continue
                ni = i
                nj = y
            elif y == -2:
                if x < 0:
                    continue
                ni = x
                nj = j
            else:
                if x < 0 or y < 0:
                    continue
                ni = x
                nj = y
            key = (ni, nj)
            t = pair_id.get(key)
            if t is None:
                t = len(pa)
                pair_id[key] = t
                pa.append(ni)
                pb.append(nj)
            rowv_arr[e] = t
        rows.append(row)
        k += 1
    tp = np.array(rows, dtype=np.int32).reshape(len(pa), m)
    return (np.array(pa, dtype=np.int32), np.array(pb, dtype=np.int32), tp)


def subset_project(trans, int initial, marked, keep):
    cdef const int32_t[:, ::1] tr = np.ascontiguousarray(trans, dtype=np.int32)
    cdef const uint8_t[::1] mk = np.ascontiguousarray(marked, dtype=np.uint8)
    cdef const uint8_t[::1] kp = np.ascontiguousarray(keep, dtype=np.uint8)
    cdef Py_ssize_t n = tr.shape[0]
    cdef Py_ssize_t m = tr.shape[1]
    kept = [e for e in range(m) if kp[e]]
    erased = [e for e in range(m) if not kp[e]]
    cdef Py_ssize_t mk2 = len(kept)

    seen_buf = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] seen = seen_buf
    stack_buf = np.empty(n, dtype=np.int32)
    cdef int32_t[::1] stack = stack_buf

    def closure(seed):
        cdef Py_ssize_t top = 0
        cdef int32_t s, t
        cdef Py_ssize_t ee
        seen_buf[:] = 0
        for s in seed:
            if not seen[s]:
                seen[s] = 1
                stack[top] = s
                top += 1
        while top > 0:
            top -= 1
            s = stack[top]
            for ee in erased:
                t = tr[s, ee]
                if t >= 0 and not seen[t]:
                    seen[t] = 1
                    stack[top] = t
                    top += 1
        return tuple(np.nonzero(seen_buf)[0].astype(np.int32).tolist())

    start = closure([initial])
    subset_id = {start: 0}
    subsets = [start]
    rows = []
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t col
    cdef int32_t t2
    cdef object t_id, nxt
    while k < len(subsets):
        cur = subsets[k]
        row = np.full(mk2, -1, dtype=np.int32)
        for col in range(mk2):
            e = kept[col]
            seed = []
            for s in cur:
                t2 = tr[s, e]
                if t2 >= 0:
                    seed.append(int(t2))
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
    tp = np.array(rows, dtype=np.int32).reshape(count, mk2)
    pmarked = np.zeros(count, dtype=np.uint8)
    members_off = np.zeros(count + 1, dtype=np.int64)
    total = 0
    for idx, sub in enumerate(subsets):
        total += len(sub)
        members_off[idx + 1] = total
        for s in sub:
            if mk[s]:
                pmarked[idx] = 1
                break
    members = np.empty(total, dtype=np.int32)
    pos = 0
    for sub in subsets:
        for s in sub:
            members[pos] = s
            pos += 1
    return tp, pmarked, members_off, members


def refine_partition(trans, status):
    cdef const int32_t[:, ::1] tr = np.ascontiguousarray(trans, dtype=np.int32)
    cdef const int32_t[::1] st = np.ascontiguousarray(status, dtype=np.int32)
    cdef Py_ssize_t n = tr.shape[0]
    cdef Py_ssize_t m = tr.shape[1]
    cls_arr = np.zeros(n, dtype=np.int32)
    cdef int32_t[::1] class_of = cls_arr
    remap = {}
    cdef Py_ssize_t s, e
    cdef object c
    for s in range(n):
        key = int(st[s])
        c = remap.get(key)
        if c is None:
            c = len(remap)
            remap[key] = c
        class_of[s] = c
    cdef Py_ssize_t n_classes = len(remap)
    cdef int32_t[::1] new_class
    while True:
        sig_id = {}
        new_arr = np.zeros(n, dtype=np.int32)
        new_class = new_arr
        for s in range(n):
            sig = [class_of[s]]
            for e in range(m):
                sig.append(class_of[tr[s, e]])
            key = tuple(sig)
            c = sig_id.get(key)
            if c is None:
                c = len(sig_id)
                sig_id[key] = c
            new_class[s] = c
        if len(sig_id) == n_classes:
            return new_arr, n_classes
        n_classes = len(sig_id)
        cls_arr = new_arr
        class_of = cls_arr
