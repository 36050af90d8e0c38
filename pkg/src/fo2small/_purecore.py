"""Pure-Python (numpy) search kernels.

A candidate structure of size N over nu unary and nb binary predicates is a
bit string of T = nu*N + nb*N*N bits read MSB-first: first every unary
predicate over elements 0..N-1 (predicate-major), then every binary
predicate over ordered pairs in row-major order.  Candidate index i carries
bit j (from the left) as (i >> (T-1-j)) & 1, so ascending indices enumerate
bit matrices in lexicographic order and the first hit is the minimal model.

`search_tables` checks a normal form via precomputed per-type truth tables;
`search_formula` evaluates an arbitrary sentence bit-parallel across a
chunk of candidates.  The compiled kernel in `_fastcore` mirrors
`search_tables` argument-for-argument and must return identical results.
"""

from __future__ import annotations

import numpy as np

from .formula import And, Atom, Const, Exists, Forall, Iff, Implies, Not, Or

CHUNK_TABLE = 1 << 16
FORMULA_CELLS = 1 << 18  # chunk size is scaled so chunk * N * N stays near this


def total_bits(n_elems: int, n_unary: int, n_binary: int) -> int:
    return n_unary * n_elems + n_binary * n_elems * n_elems


def search_tables(
    n_elems,
    n_unary,
    n_binary,
    alpha_diag,
    beta_diag,
    alpha_pair,
    beta_x,
    beta_y,
    full_mask,
    start,
    stop,
):
    """First candidate index in [start, stop) whose structure satisfies the
    tabled normal form, or -1.

    alpha_diag/beta_diag are indexed by 1-type code, alpha_pair/beta_x/beta_y
    by 2-type code; alpha_pair must already account for both pair directions
    and beta masks use bit i for the i-th existential part.
    """
    N, nu, nb = n_elems, n_unary, n_binary
    T = total_bits(N, nu, nb)
    adiag = alpha_diag.astype(bool)
    apair = alpha_pair.astype(bool)
    umask = (1 << nu) - 1
    full = np.uint64(full_mask)

    base = start
    while base < stop:
        hi = min(base + CHUNK_TABLE, stop)
        idx = np.arange(base, hi, dtype=np.int64)
        ok = np.ones(idx.shape, dtype=bool)

        pis = []
        for a in range(N):
            pi = np.zeros(idx.shape, dtype=np.int64)
            for j in range(nu):
                pi |= ((idx >> (T - 1 - (j * N + a))) & 1) << j
            for j in range(nb):
                sh = T - 1 - (nu * N + j * N * N + a * N + a)
                pi |= ((idx >> sh) & 1) << (nu + j)
            pis.append(pi)
            ok &= adiag[pi]

        cov = [beta_diag[pi].copy() for pi in pis]
        for a in range(N):
            ua = pis[a] & umask
            da = pis[a] >> nu
            for b in range(a + 1, N):
                ub = pis[b] & umask
                db = pis[b] >> nu
                eab = np.zeros(idx.shape, dtype=np.int64)
                eba = np.zeros(idx.shape, dtype=np.int64)
                for j in range(nb):
                    eab |= ((idx >> (T - 1 - (nu * N + j * N * N + a * N + b))) & 1) << j
                    eba |= ((idx >> (T - 1 - (nu * N + j * N * N + b * N + a))) & 1) << j
                tau = (
                    ua
                    | (ub << nu)
                    | (da << (2 * nu))
                    | (db << (2 * nu + nb))
                    | (eab << (2 * nu + 2 * nb))
                    | (eba << (2 * nu + 3 * nb))
                )
                ok &= apair[tau]
                cov[a] |= beta_x[tau]
                cov[b] |= beta_y[tau]

        for a in range(N):
            ok &= cov[a] == full

        hits = np.nonzero(ok)[0]
        if hits.size:
            return int(idx[hits[0]])
        base = hi
    return -1


def _formula_chunk(phi, vocab, n_elems, idx):
    """Truth of the sentence on every candidate in idx (bit-parallel)."""
    N = n_elems
    nu, nb = vocab.n, vocab.m
    T = total_bits(N, nu, nb)
    L = idx.shape[0]

    ubits = np.zeros((nu, L, N), dtype=bool)
    for j in range(nu):
        for a in range(N):
            ubits[j, :, a] = (idx >> (T - 1 - (j * N + a))) & 1
    bbits = np.zeros((nb, L, N, N), dtype=bool)
    for j in range(nb):
        for a in range(N):
            for b in range(N):
                sh = T - 1 - (nu * N + j * N * N + a * N + b)
                bbits[j, :, a, b] = (idx >> sh) & 1

    def rec(node):
        # arrays broadcastable to (L, N, N); axis 1 is x, axis 2 is y
        if isinstance(node, Const):
            return np.full((L, 1, 1), node.value, dtype=bool)
        if isinstance(node, Atom):
            if len(node.args) == 1:
                j = vocab.unary_index(node.pred)
                return ubits[j][:, :, None] if node.args[0] == "x" else ubits[j][:, None, :]
            j = vocab.binary_index(node.pred)
            a, b = node.args
            if (a, b) == ("x", "y"):
                return bbits[j]
            if (a, b) == ("y", "x"):
                return bbits[j].transpose(0, 2, 1)
            diag = bbits[j][:, np.arange(N), np.arange(N)]
            return diag[:, :, None] if a == "x" else diag[:, None, :]
        if isinstance(node, Not):
            return ~rec(node.inner)
        if isinstance(node, And):
            return rec(node.left) & rec(node.right)
        if isinstance(node, Or):
            return rec(node.left) | rec(node.right)
        if isinstance(node, Implies):
            return ~rec(node.left) | rec(node.right)
        if isinstance(node, Iff):
            return rec(node.left) == rec(node.right)
        if isinstance(node, (Forall, Exists)):
            val = np.broadcast_to(rec(node.body), (L, N, N))
            axis = 1 if node.var == "x" else 2
            if isinstance(node, Forall):
                return val.all(axis=axis, keepdims=True)
            return val.any(axis=axis, keepdims=True)
        raise TypeError(f"not a formula: {node!r}")

    return np.broadcast_to(rec(phi), (L, N, N))[:, 0, 0]


def search_formula(phi, vocab, n_elems, start, stop):
    """First candidate index in [start, stop) whose structure satisfies the
    sentence, or -1."""
    if n_elems < 1:
        raise ValueError("search needs at least one element")
    chunk = max(1, FORMULA_CELLS // (n_elems * n_elems))
    base = start
    while base < stop:
        hi = min(base + chunk, stop)
        idx = np.arange(base, hi, dtype=np.int64)
        ok = _formula_chunk(phi, vocab, n_elems, idx)
        hits = np.nonzero(ok)[0]
        if hits.size:
            return int(idx[hits[0]])
        base = hi
    return -1
