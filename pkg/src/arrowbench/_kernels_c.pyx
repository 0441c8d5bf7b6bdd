# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernels_py.embeddings_binary.

Kept deliberately minimal: the binary-signature embedding enumeration is
the one inner loop that dominates the sweeps, so it is the only kernel
worth compiling.  Output order (lexicographic on the map tuple) must
match the pure implementation exactly.
"""


def embeddings_binary(int na, int nb, labels_a, labels_b, int n_adj,
                      const unsigned char[:] a_flat, const unsigned char[:] b_flat,
                      bint first_only=False):
    cdef int i, j, v, fj, s, ao, bo
    cdef bint ok
    cdef int asq = na * na
    cdef int bsq = nb * nb

    if na > 64 or nb > 64:
        from arrowbench._kernels_py import embeddings_binary as _py
        return _py(na, nb, labels_a, labels_b, n_adj, bytes(a_flat), bytes(b_flat), first_only)

    cdef long[64] la_buf
    cdef long[64] lb_buf
    for i in range(na):
        la_buf[i] = labels_a[i]
    for v in range(nb):
        lb_buf[v] = labels_b[v]

    cdef int[64] f
    cdef bint[64] used
    for v in range(nb):
        used[v] = False

    out = []
    if na > nb:
        return out

    # explicit stack: cand[level] is the next target vertex to try there
    cdef int[65] cand
    cdef int level = 0
    cand[0] = 0
    while level >= 0:
        if level == na:
            out.append(tuple([f[i] for i in range(na)]))
            if first_only:
                return out
            level -= 1
            if level >= 0:
                used[f[level]] = False
            continue
        v = cand[level]
        if v >= nb:
            level -= 1
            if level >= 0:
                used[f[level]] = False
            continue
        cand[level] = v + 1
        if used[v] or lb_buf[v] != la_buf[level]:
            continue
        ok = True
        i = level
        for s in range(n_adj):
            ao = s * asq
            bo = s * bsq
            if a_flat[ao + i * na + i] != b_flat[bo + v * nb + v]:
                ok = False
                break
            for j in range(i):
                fj = f[j]
                if (a_flat[ao + i * na + j] != b_flat[bo + v * nb + fj]
                        or a_flat[ao + j * na + i] != b_flat[bo + fj * nb + v]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            used[v] = True
            f[level] = v
            level += 1
            cand[level] = 0
    return out
