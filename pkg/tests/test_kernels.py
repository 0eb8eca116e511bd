from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsk import _pykernels, kernels
from bsk.groups import cyclic, sym

BACKENDS = kernels.backends()


def adjacency(n, pairs):
    nbrs = [[] for _ in range(n)]
    for a, b in pairs:
        nbrs[a].append(b)
        nbrs[b].append(a)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(x) for x in nbrs])
    indices = np.array([w for x in nbrs for w in x], dtype=np.int64)
    return nbrs, indptr, indices


def oracle_bfs(nbrs, sources, max_depth):
    dist = [-1] * len(nbrs)
    q = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        if 0 <= max_depth <= dist[u]:
            continue
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 25))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40))
    pairs = [(a, b) for a, b in pairs if a != b]
    sources = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=3))
    depth = draw(st.integers(-1, 6))
    return n, pairs, sources, depth


def test_default_backend_is_importable():
    assert kernels.BACKEND in BACKENDS
    assert "python" in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
@given(graphs())
def test_bfs_matches_oracle(name, case):
    n, pairs, sources, depth = case
    nbrs, indptr, indices = adjacency(n, pairs)
    dist, parent = BACKENDS[name].bfs(indptr, indices, np.array(sources, dtype=np.int64), depth)
    assert list(dist) == oracle_bfs(nbrs, sources, depth)
    for v in range(n):
        if dist[v] > 0:
            assert parent[v] in nbrs[v] and dist[parent[v]] == dist[v] - 1
        else:
            assert parent[v] == -1


@given(graphs())
def test_backends_agree_on_bfs(case):
    n, pairs, sources, depth = case
    _, indptr, indices = adjacency(n, pairs)
    src = np.array(sources, dtype=np.int64)
    results = [m.bfs(indptr, indices, src, depth) for m in BACKENDS.values()]
    for d, p in results[1:]:
        assert np.array_equal(d, results[0][0]) and np.array_equal(p, results[0][1])


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_associativity_kernel(name):
    mod = BACKENDS[name]
    assert mod.first_nonassociative(sym(3).table) is None
    # x*y = x - y mod 3 is not associative: (0-0)-1 = 2 but 0-(0-1) = 1
    t = (np.arange(3)[:, None] - np.arange(3)[None, :]) % 3
    assert mod.first_nonassociative(t) == (0, 0, 1)


@pytest.mark.parametrize("name", sorted(BACKENDS))
@given(st.integers(1, 12), st.lists(st.integers(0, 11), max_size=3))
def test_closure_in_cyclic_groups(name, n, gens):
    g = cyclic(n)
    gens = [x % n for x in gens]
    got = BACKENDS[name].closure(g.table, np.array(gens, dtype=np.int64), 0)
    step = np.gcd.reduce([n] + gens)
    assert sorted(int(x) for x in got) == list(range(0, n, int(step)))


@given(st.integers(1, 15), st.data())
def test_backends_agree_on_orbits(n, data):
    perms = data.draw(st.lists(st.permutations(list(range(n))), max_size=4))
    arr = np.array(perms, dtype=np.int64).reshape(-1, n)
    labels = [list(m.orbit_labels(arr, n)) for m in BACKENDS.values()]
    assert all(lab == labels[0] for lab in labels)
    # oracle: orbits by repeated application
    for x in range(n):
        orbit, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for p in perms:
                for z in (p[y], p.index(y)):
                    if z not in orbit:
                        orbit.add(z)
                        stack.append(z)
        assert labels[0][x] == min(orbit)


def test_empty_generator_closure_is_trivial():
    got = _pykernels.closure(cyclic(4).table, np.array([], dtype=np.int64), 0)
    assert list(got) == [0]
