"""Pure-Python integer kernels.

Same signatures and results as the compiled ``_ckernels`` module. Inputs are
numpy integer arrays; outputs are numpy ``int64`` arrays or plain tuples.
"""
from collections import deque

import numpy as np


def bfs(indptr, indices, sources, max_depth=-1):
    """Breadth-first search over a CSR adjacency.

    Returns ``(dist, parent)``; unreached vertices have ``dist == -1`` and
    sources have ``parent == -1``. ``max_depth < 0`` means unbounded.
    """
    indptr = np.asarray(indptr, dtype=np.int64).tolist()
    indices = np.asarray(indices, dtype=np.int64).tolist()
    n = len(indptr) - 1
    dist = [-1] * n
    parent = [-1] * n
    queue = deque()
    for s in np.asarray(sources, dtype=np.int64).tolist():
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        if 0 <= max_depth <= du:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du + 1
                parent[w] = u
                queue.append(w)
    return np.array(dist, dtype=np.int64), np.array(parent, dtype=np.int64)


def first_nonassociative(table):
    t = np.asarray(table, dtype=np.int64).tolist()
    n = len(t)
    for a in range(n):
        ta = t[a]
        for b in range(n):
            ab = ta[b]
            tb = t[b]
            tab = t[ab]
            for c in range(n):
                if tab[c] != ta[tb[c]]:
                    return (a, b, c)
    return None


def closure(table, gens, identity):
    """Smallest subset containing ``gens`` and ``identity`` closed under the table product."""
    t = np.asarray(table, dtype=np.int64).tolist()
    gens = [int(g) for g in gens]
    seen = [False] * len(t)
    seen[identity] = True
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            row = t[x]
            for g in gens:
                y = row[g]
                if not seen[y]:
                    seen[y] = True
                    nxt.append(y)
        frontier = nxt
    return np.flatnonzero(np.array(seen, dtype=bool)).astype(np.int64)


def orbit_labels(perms, n):
    """Label each point 0..n-1 by the least point of its orbit under ``perms``."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in np.asarray(perms, dtype=np.int64).reshape(-1, n).tolist():
        for x, y in enumerate(row):
            rx, ry = find(x), find(y)
            if rx != ry:
                if rx < ry:
                    parent[ry] = rx
                else:
                    parent[rx] = ry
    return np.array([find(x) for x in range(n)], dtype=np.int64)
