# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def bfs(indptr, indices, sources, long long max_depth=-1):
    cdef const i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const i64[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int64)
    parent_arr = np.full(n, -1, dtype=np.int64)
    queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] dist = dist_arr
    cdef i64[::1] parent = parent_arr
    cdef i64[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, k
    cdef i64 u, w, du, s
    for k in range(src.shape[0]):
        s = src[k]
        if dist[s] < 0:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if max_depth >= 0 and du >= max_depth:
            continue
        for k in range(ip[u], ip[u + 1]):
            w = ix[k]
            if dist[w] < 0:
                dist[w] = du + 1
                parent[w] = u
                queue[tail] = w
                tail += 1
    return dist_arr, parent_arr


def first_nonassociative(table):
    cdef const i64[:, ::1] t = np.ascontiguousarray(table, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], a, b, c
    cdef i64 ab
    for a in range(n):
        for b in range(n):
            ab = t[a, b]
            for c in range(n):
                if t[ab, c] != t[a, t[b, c]]:
                    return (a, b, c)
    return None


def closure(table, gens, long long identity):
    cdef const i64[:, ::1] t = np.ascontiguousarray(table, dtype=np.int64)
    cdef const i64[::1] g = np.ascontiguousarray(gens, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], k
    seen_arr = np.zeros(n, dtype=np.uint8)
    stack_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.uint8_t[::1] seen = seen_arr
    cdef i64[::1] stack = stack_arr
    cdef Py_ssize_t top = 0
    cdef i64 x, y
    seen[identity] = 1
    stack[top] = identity
    top += 1
    while top > 0:
        top -= 1
        x = stack[top]
        for k in range(g.shape[0]):
            y = t[x, g[k]]
            if not seen[y]:
                seen[y] = 1
                stack[top] = y
                top += 1
    return np.flatnonzero(seen_arr).astype(np.int64)


cdef inline i64 _find(i64[::1] parent, i64 x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def orbit_labels(perms, long long n):
    cdef const i64[:, ::1] p = np.ascontiguousarray(np.asarray(perms, dtype=np.int64).reshape(-1, n))
    parent_arr = np.arange(n, dtype=np.int64)
    cdef i64[::1] parent = parent_arr
    cdef Py_ssize_t r, x
    cdef i64 rx, ry
    for r in range(p.shape[0]):
        for x in range(n):
            rx = _find(parent, x)
            ry = _find(parent, p[r, x])
            if rx != ry:
                if rx < ry:
                    parent[ry] = rx
                else:
                    parent[rx] = ry
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    for x in range(n):
        o[x] = _find(parent, x)
    return out
