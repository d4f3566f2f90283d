"""Compiled union-find sweeps used by :func:`stablepd.persistence.compute_pd`.

Both kernels return parallel arrays ``(birth_idx, death_idx)`` of flat
indices into the value array they were given; the caller maps indices to
values. Keeping indices (instead of values) lets the caller decide how to
treat zero-persistence pairs without re-running the sweep.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def superlevel_h0(values, order, height, width):
    """Elder-rule merge tree of 4-connected pixels, added in ``order``.

    ``order`` must list pixels by descending value, ties by ascending
    row-major index. Each root stores the pixel that created its component;
    on a merge the component whose creator has the lower value (or, on a
    value tie, the larger index) dies at the current pixel's value.
    Returns ``(birth_idx, death_idx, essential_idx)``.
    """
    n = height * width
    parent = np.full(n, -1, dtype=np.int64)
    creator = np.empty(n, dtype=np.int64)
    births = np.empty(n, dtype=np.int64)
    deaths = np.empty(n, dtype=np.int64)
    k = 0
    for t in range(n):
        p = order[t]
        parent[p] = p
        creator[p] = p
        r = p // width
        c = p - r * width
        for s in range(4):
            if s == 0:
                if r == 0:
                    continue
                q = p - width
            elif s == 1:
                if c == 0:
                    continue
                q = p - 1
            elif s == 2:
                if c == width - 1:
                    continue
                q = p + 1
            else:
                if r == height - 1:
                    continue
                q = p + width
            if parent[q] < 0:
                continue
            ra = _find(parent, p)
            rb = _find(parent, q)
            if ra == rb:
                continue
            ca = creator[ra]
            cb = creator[rb]
            # elder: higher birth value, then smaller creating index
            if values[ca] > values[cb] or (values[ca] == values[cb] and ca < cb):
                elder, younger = ra, rb
            else:
                elder, younger = rb, ra
            births[k] = creator[younger]
            deaths[k] = p
            k += 1
            parent[younger] = elder
    root = _find(parent, order[0])
    return births[:k].copy(), deaths[:k].copy(), creator[root]


@njit(cache=True, nogil=True)
def superlevel_h1(values, order, height, width):
    """Loops of the super-level complex via the dual graph of unit squares.

    Dual vertices are the ``(height-1) x (width-1)`` unit squares (value =
    min of their four pixels) plus one outer vertex; dual edges are the
    primal edges (value = min of their two pixels). Sweeping the dual graph
    by ascending value, a component dying at dual edge ``e`` is a loop born
    at ``e`` and filled at its lowest square. The outer vertex is the eldest.

    Edges are visited by walking ``order`` backwards (ascending value) and
    taking each edge at whichever endpoint is reached first, which is its
    minimum pixel. Returns ``(birth_edge_pixel, death_square_pixel)``.
    """
    n = height * width
    sh = height - 1
    sw = width - 1
    nsq = sh * sw
    if nsq <= 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    outer = nsq
    sq_pix = np.empty(nsq, dtype=np.int64)
    sq_val = np.empty(nsq, dtype=values.dtype)
    for i in range(sh):
        for j in range(sw):
            p = i * width + j
            best = p
            for q in (p + 1, p + width, p + width + 1):
                if values[q] < values[best] or (values[q] == values[best] and q < best):
                    best = q
            sq_pix[i * sw + j] = best
            sq_val[i * sw + j] = values[best]
    parent = np.arange(nsq + 1)
    # creator square of each root; the outer root is marked with -1
    creator = np.arange(nsq + 1)
    creator[outer] = -1
    seen = np.zeros(n, dtype=np.bool_)
    births = np.empty(nsq, dtype=np.int64)
    deaths = np.empty(nsq, dtype=np.int64)
    n_out = 0
    for t in range(n - 1, -1, -1):
        p = order[t]
        seen[p] = True
        i = p // width
        j = p - i * width
        for s in range(4):
            # the two squares on either side of edge (p, q); squares always
            # precede their edges, so both are already in the dual graph
            if s == 0:
                if i == 0:
                    continue
                q = p - width
                a = (i - 1) * sw + j - 1 if j > 0 else outer
                b = (i - 1) * sw + j if j < sw else outer
            elif s == 1:
                if j == 0:
                    continue
                q = p - 1
                a = (i - 1) * sw + j - 1 if i > 0 else outer
                b = i * sw + j - 1 if i < sh else outer
            elif s == 2:
                if j == sw:
                    continue
                q = p + 1
                a = (i - 1) * sw + j if i > 0 else outer
                b = i * sw + j if i < sh else outer
            else:
                if i == sh:
                    continue
                q = p + width
                a = i * sw + j - 1 if j > 0 else outer
                b = i * sw + j if j < sw else outer
            if seen[q]:
                continue
            ra = _find(parent, a)
            rb = _find(parent, b)
            if ra == rb:
                continue
            ca = creator[ra]
            cb = creator[rb]
            if ca < 0:
                elder, younger = ra, rb
            elif cb < 0:
                elder, younger = rb, ra
            elif sq_val[ca] < sq_val[cb] or (sq_val[ca] == sq_val[cb] and ca < cb):
                elder, younger = ra, rb
            else:
                elder, younger = rb, ra
            births[n_out] = p
            deaths[n_out] = sq_pix[creator[younger]]
            n_out += 1
            parent[younger] = elder
    return births[:n_out].copy(), deaths[:n_out].copy()
