"""Dense exact arithmetic over GF(p): matrices, Kronecker products, vector indexing.

Entries are machine-word residues in [0, p); every computation reduces mod p.
The moduli used by the verification pipeline never exceed 19, so ordinary
int64 arithmetic is exact everywhere (row sums stay far below 2**63).

Vector indexing is little-endian throughout the package: the vector v over
GF(p) of length n corresponds to the integer sum(v[i] * p**i).
"""

from __future__ import annotations

import numpy as np

from .errors import FieldMismatch, IndexOutOfRange, SingularMatrix


class FieldMatrix:
    """An immutable dense matrix over GF(p).

    Wraps an int64 ndarray with all entries reduced mod p. Hashable via the
    packed byte representation, so matrices can be used as dict/set keys.
    """

    __slots__ = ("p", "a", "_key")

    def __init__(self, p, entries, reduce=True):
        self.p = int(p)
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        if reduce:
            a = np.mod(a, self.p)
        a.setflags(write=False)
        self.a = a
        self._key = None

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64), reduce=False)

    @classmethod
    def zeros(cls, p, rows, cols=None):
        cols = rows if cols is None else cols
        return cls(p, np.zeros((rows, cols), dtype=np.int64), reduce=False)

    @classmethod
    def diagonal(cls, p, diag):
        return cls(p, np.diag(np.asarray(diag, dtype=np.int64)))

    @property
    def dim_rows(self):
        return self.a.shape[0]

    @property
    def dim_cols(self):
        return self.a.shape[1]

    @property
    def n(self):
        if self.a.shape[0] != self.a.shape[1]:
            raise ValueError("matrix is not square")
        return self.a.shape[0]

    def key(self):
        """Hashable identity: (p, shape, packed entries)."""
        if self._key is None:
            self._key = (self.p, self.a.shape, self.a.astype(np.uint8).tobytes())
        return self._key

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.a.shape == other.a.shape and np.array_equal(self.a, other.a)

    def __repr__(self):
        return f"FieldMatrix(p={self.p}, {self.a.tolist()})"

    def __matmul__(self, other):
        return mat_mul(self, other)

    def is_identity(self):
        n = self.a.shape[0]
        return self.a.shape[1] == n and np.array_equal(self.a, np.eye(n, dtype=np.int64))

    def is_scalar(self):
        """Return the scalar c with self == c*I, or None."""
        n = self.a.shape[0]
        if self.a.shape[1] != n:
            return None
        c = int(self.a[0, 0])
        if np.array_equal(self.a, c * np.eye(n, dtype=np.int64) % self.p):
            return c
        return None

    def transpose(self):
        return FieldMatrix(self.p, self.a.T.copy(), reduce=False)

    def inv(self):
        return mat_inv(self)

    def apply(self, vec):
        """Matrix times column vector (1-d int array), reduced mod p."""
        return (self.a @ np.asarray(vec, dtype=np.int64)) % self.p

    def pow(self, k):
        n = self.n
        if k < 0:
            return mat_inv(self).pow(-k)
        result = FieldMatrix.identity(self.p, n)
        base = self
        while k:
            if k & 1:
                result = mat_mul(result, base)
            base = mat_mul(base, base)
            k >>= 1
        return result


def _check_same_field(a, b):
    if a.p != b.p:
        raise FieldMismatch(f"moduli differ: {a.p} vs {b.p}")


def mat_mul(a, b):
    """Product of two matrices over the same GF(p)."""
    _check_same_field(a, b)
    if a.dim_cols != b.dim_rows:
        raise ValueError(f"incompatible dimensions {a.a.shape} x {b.a.shape}")
    return FieldMatrix(a.p, (a.a @ b.a) % a.p, reduce=False)


def mat_mul_many(mats):
    it = iter(mats)
    out = next(it)
    for m in it:
        out = mat_mul(out, m)
    return out


def inv_mod(x, p):
    return pow(int(x), p - 2, p)


def _row_echelon(m, p):
    """In-place row echelon form; returns (matrix, pivot column list).

    First-nonzero pivoting: within each column the topmost unprocessed
    nonzero row is used, which keeps the reduction deterministic.
    """
    m = m % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * inv_mod(m[r, c], p)) % p
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - np.outer(m[other, c], m[r])) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat):
    """Rank of a FieldMatrix (or raw array with modulus)."""
    if isinstance(mat, FieldMatrix):
        m, p = mat.a.copy(), mat.p
    else:
        raise TypeError("rank expects a FieldMatrix")
    _, pivots = _row_echelon(m, p)
    return len(pivots)


def kernel_dim(g):
    """Dimension of the null space of a square FieldMatrix."""
    if g.dim_rows != g.dim_cols:
        raise ValueError("kernel_dim expects a square matrix")
    return g.dim_rows - rank(g)


def nullspace_basis(rows, p):
    """Basis of the right null space of an integer coefficient array mod p.

    Returns a list of 1-d int64 arrays. The basis is the standard one read
    off reduced row echelon form, hence deterministic.
    """
    m = np.array(rows, dtype=np.int64)
    if m.size == 0:
        raise ValueError("empty system")
    m, pivots = _row_echelon(m.copy(), p)
    cols = m.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-m[r, f]) % p
        basis.append(v)
    return basis


def mat_inv(a):
    """Inverse via Gaussian elimination; raises SingularMatrix if det = 0."""
    n = a.n
    p = a.p
    aug = np.concatenate([a.a % p, np.eye(n, dtype=np.int64)], axis=1)
    aug, pivots = _row_echelon(aug, p)
    if pivots != list(range(n)):
        raise SingularMatrix("matrix has no inverse mod %d" % p)
    return FieldMatrix(p, aug[:, n:].copy(), reduce=False)


def kron(a, b):
    """Kronecker product: kron(a, b) @ (u tensor v) = (a @ u) tensor (b @ v)."""
    _check_same_field(a, b)
    return FieldMatrix(a.p, np.kron(a.a, b.a) % a.p, reduce=False)


def kron_many(mats):
    it = iter(mats)
    out = next(it)
    for m in it:
        out = kron(out, m)
    return out


# ---------------------------------------------------------------------------
# Vector <-> index bijection (little-endian digits, v[i] is the p**i digit).

def powers(p, n):
    return np.array([p**i for i in range(n)], dtype=np.int64)


def unrank_vec(index, p, n):
    """Decode an index in [0, p**n) into its digit vector."""
    index = int(index)
    if not 0 <= index < p**n:
        raise IndexOutOfRange(f"index {index} outside [0, {p}**{n})")
    v = np.empty(n, dtype=np.int64)
    for i in range(n):
        index, d = divmod(index, p)
        v[i] = d
    return v


def rank_vec(vec, p):
    """Encode a digit vector into its index."""
    vec = np.asarray(vec, dtype=np.int64) % p
    return int(vec @ powers(p, len(vec)))


def decode_indices(indices, p, n):
    """Vectorised unrank: (N,) int array -> (N, n) digit array."""
    idx = np.asarray(indices, dtype=np.int64)
    out = np.empty((idx.shape[0], n), dtype=np.int64)
    rem = idx.copy()
    for i in range(n):
        out[:, i] = rem % p
        rem //= p
    return out


def encode_vectors(vecs, p):
    """Vectorised rank: (N, n) digit array -> (N,) index array."""
    v = np.asarray(vecs, dtype=np.int64)
    return v @ powers(p, v.shape[1])


def batch_kernel_dims(stack, p):
    """Null space dimensions for a (B, n, n) stack of matrices mod p.

    Vectorised Gaussian elimination across the batch; used by the fixed-point
    averaging oracle where hundreds of thousands of small kernels are needed.
    """
    m = np.mod(np.asarray(stack, dtype=np.int64), p)
    bsz, n, _ = m.shape
    ranks = np.zeros(bsz, dtype=np.int64)
    row = np.zeros(bsz, dtype=np.int64)  # next pivot row per item
    batch = np.arange(bsz)
    for col in range(n):
        # pick topmost nonzero entry at or below the current pivot row
        colvals = m[:, :, col]
        rows_idx = np.arange(n)[None, :]
        eligible = (colvals != 0) & (rows_idx >= row[:, None])
        has = eligible.any(axis=1)
        pivot = np.where(has, eligible.argmax(axis=1), 0)
        sel = np.nonzero(has)[0]
        if sel.size:
            r = row[sel]
            pr = pivot[sel]
            # swap pivot row into place
            tmp = m[sel, r, :].copy()
            m[sel, r, :] = m[sel, pr, :]
            m[sel, pr, :] = tmp
            lead = m[sel, r, col]
            inv = np.array([inv_mod(x, p) for x in lead], dtype=np.int64)
            m[sel, r, :] = (m[sel, r, :] * inv[:, None]) % p
            # eliminate the column everywhere else
            factor = m[sel, :, col].copy()
            factor[batch[: sel.size], r] = 0
            m[sel] = (m[sel] - factor[:, :, None] * m[sel, r, None, :]) % p
            ranks[sel] += 1
            row[sel] += 1
    return n - ranks
