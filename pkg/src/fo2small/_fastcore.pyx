# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the table-driven search in `_purecore`.

Same candidate bit layout, same arguments, same results; only the inner
loop runs as C.  See `_purecore` for the layout contract.
"""


def search_tables(int n_elems, int n_unary, int n_binary,
                  const unsigned char[::1] alpha_diag,
                  const unsigned long long[::1] beta_diag,
                  const unsigned char[::1] alpha_pair,
                  const unsigned long long[::1] beta_x,
                  const unsigned long long[::1] beta_y,
                  unsigned long long full_mask,
                  unsigned long long start,
                  unsigned long long stop):
    cdef int N = n_elems, nu = n_unary, nb = n_binary
    cdef int T = nu * N + nb * N * N
    cdef unsigned long long i
    cdef int a, b, j
    cdef long long pis[64]
    cdef unsigned long long cov[64]
    cdef long long pi, ua, da, ub, db, eab, eba, tau
    cdef long long umask = (1 << nu) - 1
    cdef bint good

    if N > 64:
        raise ValueError("compiled kernel supports at most 64 elements")

    i = start
    while i < stop:
        good = True
        for a in range(N):
            pi = 0
            for j in range(nu):
                pi |= ((i >> (T - 1 - (j * N + a))) & 1) << j
            for j in range(nb):
                pi |= ((i >> (T - 1 - (nu * N + j * N * N + a * N + a))) & 1) << (nu + j)
            if not alpha_diag[pi]:
                good = False
                break
            pis[a] = pi
            cov[a] = beta_diag[pi]
        if good:
            for a in range(N):
                ua = pis[a] & umask
                da = pis[a] >> nu
                for b in range(a + 1, N):
                    ub = pis[b] & umask
                    db = pis[b] >> nu
                    eab = 0
                    eba = 0
                    for j in range(nb):
                        eab |= ((i >> (T - 1 - (nu * N + j * N * N + a * N + b))) & 1) << j
                        eba |= ((i >> (T - 1 - (nu * N + j * N * N + b * N + a))) & 1) << j
                    tau = (ua | (ub << nu) | (da << (2 * nu)) | (db << (2 * nu + nb))
                           | (eab << (2 * nu + 2 * nb)) | (eba << (2 * nu + 3 * nb)))
                    if not alpha_pair[tau]:
                        good = False
                        break
                    cov[a] |= beta_x[tau]
                    cov[b] |= beta_y[tau]
                if not good:
                    break
        if good:
            for a in range(N):
                if cov[a] != full_mask:
                    good = False
                    break
        if good:
            return i
        i += 1
    return -1
