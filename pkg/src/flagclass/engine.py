"""Vectorized exhaustive machinery over the coordinate space of u.

Conjugation by a fixed group element is linear in x, so a state is just
its vector of cross-position coordinates, encoded as the big-endian
base-q integer key used everywhere in this package.  Orbit BFS, the
kernel-dimension sweep behind the commuting count, and the 0/1 pattern
scan all run on numpy integer arrays; every operation is exact table or
modular arithmetic, never floating point.

Fields with q <= 256 use uint8 digits and a q x q multiplication table;
larger extension fields fall back to log/antilog gathers, and additions
are XOR in characteristic 2, table lookups for small odd q, digitwise
mod p otherwise.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

BFS_CHUNK = 1 << 16
SWEEP_CHUNK = 1 << 16


class FieldKit:
    """Vectorized arithmetic bound to one finite field."""

    def __init__(self, field):
        self.field = field
        self.q = q = field.q
        self.p = field.p
        self.k = field.k
        self.prime = field.k == 1
        self.char2 = field.p == 2
        self.dtype = np.uint8 if q <= 256 else np.uint16
        # uint8 products stay below 256 for q <= 15, so no upcasting needed
        self.small_prime = self.prime and q <= 15
        self.inv_arr = np.array([0] + [field.inv(a) for a in range(1, q)], dtype=self.dtype)
        self.neg_arr = np.array([field.neg(a) for a in range(q)], dtype=self.dtype)
        self.mul_table = None
        self.add_table = None
        self.exp_arr = None
        self.log_arr = None
        if not self.prime:
            if q <= 256:
                self.mul_table = np.array(
                    [[field.mul(a, b) for b in range(q)] for a in range(q)], dtype=self.dtype
                )
            else:
                self.exp_arr = np.array(field._exp, dtype=np.int64)
                self.log_arr = np.array([0] + [field._log[a] for a in range(1, q)], dtype=np.int64)
            if not self.char2 and q <= 1024:
                self.add_table = np.array(
                    [[field.add(a, b) for b in range(q)] for a in range(q)], dtype=self.dtype
                )

    # -- elementwise ops (broadcasting) --------------------------------------

    def mul(self, a, b):
        if self.small_prime:
            return (a * b) % self.q
        if self.prime:
            return ((np.asarray(a).astype(np.int64) * b) % self.q).astype(self.dtype)
        if self.mul_table is not None:
            return self.mul_table[a, b]
        r = self.exp_arr[(self.log_arr[a] + self.log_arr[b]) % (self.q - 1)]
        return np.where((np.asarray(a) == 0) | (np.asarray(b) == 0), 0, r).astype(self.dtype)

    def add(self, a, b):
        if self.small_prime:
            return (a + b) % self.q
        if self.prime:
            return ((np.asarray(a).astype(np.int64) + b) % self.q).astype(self.dtype)
        if self.char2:
            return a ^ b
        if self.add_table is not None:
            return self.add_table[a, b]
        p = self.p
        aa, bb = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        aa = aa.astype(np.int64)
        bb = bb.astype(np.int64)
        res = np.zeros(aa.shape, dtype=np.int64)
        shift = 1
        for _ in range(self.k):
            res += ((aa + bb) % p) * shift
            aa //= p
            bb //= p
            shift *= p
        return res.astype(self.dtype)

    def sub(self, a, b):
        return self.add(a, self.neg_arr[b])

    # -- linear algebra -------------------------------------------------------

    def matvec_all(self, gens, digits):
        """Apply every generator matrix to every digit vector.

        gens: (g, m, m), digits: (B, m) -> images (g, B, m).
        """
        g, m, _ = gens.shape
        if self.prime:
            acc_dtype = np.int16 if m * (self.q - 1) ** 2 < 32767 else np.int64
            out = np.matmul(
                digits.astype(acc_dtype)[None, :, :],
                np.transpose(gens, (0, 2, 1)).astype(acc_dtype),
            )
            return (out % self.q).astype(self.dtype)
        acc = np.zeros((g, digits.shape[0], m), dtype=self.dtype)
        for j in range(m):
            contrib = self.mul(gens[:, None, :, j], digits[None, :, j, None])
            acc = self.add(acc, contrib)
        return acc

    def combine_states(self, states, tensor):
        """Contract states with a structure tensor: out[b] = sum_c x[b,c] * T[c].

        states: (B, m), tensor: (m, m, m) -> (B, m, m).
        """
        m = tensor.shape[0]
        if self.prime:
            acc_dtype = np.int16 if m * (self.q - 1) ** 2 < 32767 else np.int64
            out = np.einsum("bc,cij->bij", states.astype(acc_dtype), tensor.astype(acc_dtype))
            return (out % self.q).astype(self.dtype)
        acc = np.zeros((states.shape[0], m, m), dtype=self.dtype)
        for c in range(m):
            acc = self.add(acc, self.mul(states[:, c, None, None], tensor[c][None, :, :]))
        return acc

    def rank_many(self, mats):
        """Ranks of a batch of square matrices by simultaneous elimination.

        Columns left of the current pivot column are never read again, so
        every row operation works on the trailing slice only.
        """
        A = np.array(mats, dtype=self.dtype, copy=True)
        B, m, _ = A.shape
        row = np.zeros(B, dtype=np.int64)
        ar = np.arange(m, dtype=np.int64)
        bidx = np.arange(B, dtype=np.int64)
        for col in range(m):
            cand = (A[:, :, col] != 0) & (ar[None, :] >= row[:, None])
            has = cand.any(axis=1)
            if not has.any():
                continue
            piv = np.argmax(cand, axis=1)
            b = bidx[has]
            r0 = row[b]
            r1 = piv[b]
            tmp = A[b, r0, col:].copy()
            A[b, r0, col:] = A[b, r1, col:]
            A[b, r1, col:] = tmp
            pv = A[b, r0, col]
            A[b, r0, col:] = self.mul(self.inv_arr[pv][:, None], A[b, r0, col:]).astype(self.dtype)
            # factor is zero exactly on rows that must stay untouched
            elim = (ar[None, :] > row[:, None]) & has[:, None]
            factor = np.where(elim, A[:, :, col], 0).astype(self.dtype)
            pivrow = A[bidx, np.minimum(row, m - 1), col:]
            A[:, :, col:] = self.sub(
                A[:, :, col:], self.mul(factor[:, :, None], pivrow[:, None, :])
            ).astype(self.dtype)
            row[b] += 1
            if (row == m).all():
                break
        return row


def powers_of(q: int, m: int) -> np.ndarray:
    return np.array([q ** (m - 1 - i) for i in range(m)], dtype=np.int64)


def keys_to_digits(keys, m, q, dtype):
    D = np.empty((keys.size, m), dtype=dtype)
    k = keys.astype(np.int64, copy=True)
    for i in range(m - 1, -1, -1):
        D[:, i] = (k % q).astype(dtype)
        k //= q
    return D


def _next_unlabeled(labels, start):
    N = labels.size
    step = 1 << 16
    i = start
    while i < N:
        block = labels[i : min(N, i + step)]
        hits = np.nonzero(block == -1)[0]
        if hits.size:
            return i + int(hits[0])
        i += step
    return -1


def bfs_partition(N, m, q, kit, gen_mats, chunk=BFS_CHUNK):
    """Partition all N = q^m states into orbits under the generator actions.

    Returns (labels, seeds, sizes): labels maps key -> orbit index, seeds
    are the minimal keys per orbit in discovery (= ascending) order.
    """
    labels = np.full(N, -1, dtype=np.int32)
    powers = powers_of(q, m)
    G = np.ascontiguousarray(gen_mats)
    seeds = []
    sizes = []
    ptr = 0
    while True:
        ptr = _next_unlabeled(labels, ptr)
        if ptr < 0:
            break
        idx = len(seeds)
        seeds.append(ptr)
        labels[ptr] = idx
        size = 1
        frontier = np.array([ptr], dtype=np.int64)
        while frontier.size:
            parts = []
            for lo in range(0, frontier.size, chunk):
                part = frontier[lo : lo + chunk]
                D = keys_to_digits(part, m, q, kit.dtype)
                imgs = kit.matvec_all(G, D).reshape(-1, m)
                keys = imgs.astype(np.int64) @ powers
                fresh = keys[labels[keys] == -1]
                if fresh.size:
                    u = np.unique(fresh)
                    labels[u] = idx
                    size += int(u.size)
                    parts.append(u)
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
        sizes.append(size)
    return labels, np.array(seeds, dtype=np.int64), np.array(sizes, dtype=np.int64)


def bfs_orbit_size(seed, m, q, kit, gen_mats, scratch, stamp, chunk=BFS_CHUNK):
    """Size of one orbit; scratch is a reusable int32 array marked with stamp."""
    powers = powers_of(q, m)
    G = np.ascontiguousarray(gen_mats)
    scratch[seed] = stamp
    size = 1
    frontier = np.array([seed], dtype=np.int64)
    while frontier.size:
        parts = []
        for lo in range(0, frontier.size, chunk):
            part = frontier[lo : lo + chunk]
            D = keys_to_digits(part, m, q, kit.dtype)
            imgs = kit.matvec_all(G, D).reshape(-1, m)
            keys = imgs.astype(np.int64) @ powers
            fresh = keys[scratch[keys] != stamp]
            if fresh.size:
                u = np.unique(fresh)
                scratch[u] = stamp
                size += int(u.size)
                parts.append(u)
        frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    return size


def kernel_exponent_counts(N, m, q, kit, tensor, chunk=SWEEP_CHUNK, threads=1):
    """Histogram of rank(ad_x) over every state x.

    Returns counts[r] = #states whose structure matrix has rank r; the
    commuting count is then sum_r counts[r] * q^(m - r) in exact ints.
    """

    def one_chunk(lo):
        hi = min(lo + chunk, N)
        keys = np.arange(lo, hi, dtype=np.int64)
        X = keys_to_digits(keys, m, q, kit.dtype)
        mats = kit.combine_states(X, tensor)
        ranks = kit.rank_many(mats)
        return np.bincount(ranks, minlength=m + 1)

    starts = range(0, N, chunk)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_chunk, starts))
    else:
        results = [one_chunk(lo) for lo in starts]
    total = np.zeros(m + 1, dtype=np.int64)
    for r in results:
        total += r
    return total


def zero_one_first_keys(labels, m, q, n_records, chunk=1 << 18):
    """First 0/1-pattern key per orbit, scanning patterns in state order.

    Returns an int64 array of length n_records with -1 where no pattern
    lies in the orbit.
    """
    found = np.full(n_records, -1, dtype=np.int64)
    powers = powers_of(q, m)
    shifts = (m - 1 - np.arange(m)).astype(np.int64)
    total = 1 << m
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        bits = (idx[:, None] >> shifts[None, :]) & 1
        keys = bits @ powers
        lab = labels[keys]
        uniq, first = np.unique(lab, return_index=True)
        sel = found[uniq] == -1
        found[uniq[sel]] = keys[first[sel]]
        if (found >= 0).all():
            break
    return found
