"""Dense exact linear algebra over F_{p^k}.

Matrices hold their entries as numpy digit arrays of shape (rows, cols, k),
one base-p digit vector per entry.  All reductions (rref, rank, kernel,
solve, inverse) are plain Gaussian elimination with vectorized row updates;
everything is deterministic: the pivot is always the first nonzero entry.
"""

import numpy as np


def _digits_nonzero(arr):
    return arr.any(axis=-1)


class Mat:
    __slots__ = ("F", "a")

    def __init__(self, F, digit_array):
        self.F = F
        self.a = np.asarray(digit_array, dtype=np.int64)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_codes(cls, F, rows):
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(arr.shape[0], -1)
        return cls(F, F.codes_to_array(arr))

    @classmethod
    def zeros(cls, F, r, c):
        return cls(F, np.zeros((r, c, F.k), dtype=np.int64))

    @classmethod
    def identity(cls, F, n):
        a = np.zeros((n, n, F.k), dtype=np.int64)
        a[np.arange(n), np.arange(n), 0] = 1
        return cls(F, a)

    def copy(self):
        return Mat(self.F, self.a.copy())

    # -- shape / access ------------------------------------------------------

    @property
    def shape(self):
        return self.a.shape[:2]

    def entry(self, i, j):
        return int(self.F.array_to_codes(self.a[i, j]))

    def to_codes(self):
        return self.F.array_to_codes(self.a)

    def is_zero(self):
        return not self.a.any()

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.F == other.F
                and self.shape == other.shape and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.F, self.a.tobytes(), self.shape))

    def __repr__(self):
        return "Mat(%dx%d over F_%d)\n%s" % (*self.shape, self.F.q, self.to_codes())

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        return Mat(self.F, (self.a + other.a) % self.F.p)

    def __sub__(self, other):
        return Mat(self.F, (self.a - other.a) % self.F.p)

    def __neg__(self):
        return Mat(self.F, (-self.a) % self.F.p)

    def __matmul__(self, other):
        F = self.F
        A, B = self.a, other.a
        if A.shape[1] == 0 or not A.size or not B.size:
            return Mat(F, np.zeros((A.shape[0], B.shape[1], F.k), dtype=np.int64))
        # digit-block products through float64 BLAS; exact because each
        # accumulated sum stays below (p-1)^2 * inner-dim * k << 2^53
        Af = A.astype(np.float64)
        Bf = B.astype(np.float64)
        conv = [None] * (2 * F.k - 1)
        for i in range(F.k):
            for j in range(F.k):
                prod = Af[:, :, i] @ Bf[:, :, j]
                d = i + j
                conv[d] = prod if conv[d] is None else conv[d] + prod
        conv = [np.rint(c).astype(np.int64) % F.p for c in conv]
        # fold degrees >= k back down with the little-endian monic modulus
        for d in range(2 * F.k - 2, F.k - 1, -1):
            top = conv[d]
            for j in range(F.k):
                m = F.modulus[j]
                if m:
                    conv[d - F.k + j] = (conv[d - F.k + j] - m * top) % F.p
        return Mat(F, np.stack(conv[:F.k], axis=-1))

    def scale(self, code):
        M = self.F.digit_matrix(code)
        return Mat(self.F, (self.a @ M) % self.F.p)

    @property
    def T(self):
        return Mat(self.F, self.a.swapaxes(0, 1))

    def trace(self):
        n = min(self.shape)
        t = self.a[np.arange(n), np.arange(n)].sum(axis=0) % self.F.p
        return int(self.F.array_to_codes(t))

    def matvec(self, v):
        """v: (c, k) digit array -> (r, k) digit array"""
        return (self @ Mat(self.F, v[:, None, :])).a[:, 0]

    def pow_int(self, e):
        n = self.shape[0]
        result = Mat.identity(self.F, n)
        base = self
        e = int(e)
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    # -- elimination ---------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        F = self.F
        a = self.a.copy()
        r, c, _ = a.shape
        T = F.mul_tensor
        pivots = []
        row = 0
        for col in range(c):
            if row >= r:
                break
            nz = np.nonzero(_digits_nonzero(a[row:, col]))[0]
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                a[[row, piv]] = a[[piv, row]]
            inv = F.inv(int(F.array_to_codes(a[row, col])))
            a[row] = (a[row] @ F.digit_matrix(inv)) % F.p
            # eliminate the column everywhere else in one shot
            factors = a[:, col, :].copy()
            factors[row] = 0
            upd = np.einsum("ni,cj,ijl->ncl", factors, a[row], T) % F.p
            a = (a - upd) % F.p
            pivots.append(col)
            row += 1
        return Mat(F, a), pivots

    def rank(self):
        return len(self.rref()[1])

    def nullspace(self):
        """Columns of the returned matrix form a kernel basis (c x nullity)."""
        F = self.F
        R, pivots = self.rref()
        r, c = self.shape
        free = [j for j in range(c) if j not in pivots]
        out = np.zeros((c, len(free), F.k), dtype=np.int64)
        for idx, j in enumerate(free):
            out[j, idx, 0] = 1
            for ri, pc in enumerate(pivots):
                out[pc, idx] = (-R.a[ri, j]) % F.p
        return Mat(F, out)

    def solve(self, b):
        """One solution x of self @ x = b (b a Mat with matching rows), or None."""
        F = self.F
        r, c = self.shape
        aug = Mat(F, np.concatenate([self.a, b.a], axis=1))
        R, pivots = aug.rref()
        for ri in range(len(pivots)):
            if pivots[ri] >= c:
                return None  # inconsistent
        x = np.zeros((c, b.shape[1], F.k), dtype=np.int64)
        for ri, pc in enumerate(pivots):
            if pc < c:
                x[pc] = R.a[ri, c:]
        return Mat(F, x)

    def inv(self):
        n = self.shape[0]
        x = self.solve(Mat.identity(self.F, n))
        if x is None or (self @ x).a.tobytes() != Mat.identity(self.F, n).a.tobytes():
            raise ZeroDivisionError("matrix is singular")
        return x

    # -- characteristic polynomial (Berkowitz, division free) ----------------

    def charpoly(self):
        """Little-endian code coefficients of det(tI - A), monic of degree n."""
        F = self.F
        n = self.shape[0]
        if n == 0:
            return [F.one]
        A = self.to_codes().tolist()
        # Berkowitz: iteratively build the coefficient vector via Toeplitz products
        vec = [F.one]
        for i in range(n):
            a = A[i][i]
            R = [A[i][j] for j in range(i)]        # row left of the pivot
            C = [A[j][i] for j in range(i)]        # column above the pivot
            M = [[A[r][c] for c in range(i)] for r in range(i)]
            # entries s_m = R . M^(m) . C
            s = []
            v = C
            for _ in range(i):
                s.append(_dot(F, R, v))
                v = _matvec_codes(F, M, v)
            # Toeplitz multiply: new[j] = vec[j-1]... with first column
            # (1, -a, -s_0, -s_1, ...)
            col = [F.one, F.neg(a)] + [F.neg(x) for x in s]
            new = [F.zero] * (len(vec) + 1)
            for j, vj in enumerate(vec):
                if vj == F.zero:
                    continue
                for d, cd in enumerate(col):
                    if j + d < len(new) and cd != F.zero:
                        new[j + d] = F.add(new[j + d], F.mul(cd, vj))
            vec = new
        # vec holds det(tI - A) coefficients from leading to trailing
        return list(reversed(vec))


def _dot(F, u, v):
    t = F.zero
    for a, b in zip(u, v):
        t = F.add(t, F.mul(a, b))
    return t


def _matvec_codes(F, M, v):
    return [_dot(F, row, v) for row in M]


# -- digit-vector helpers used by module code --------------------------------

def vec_from_codes(F, codes):
    return F.codes_to_array(np.asarray(codes, dtype=np.int64).reshape(1, -1))[0]


def vec_is_zero(v):
    return not v.any()


def vec_scale(F, v, code):
    return (v @ F.digit_matrix(code)) % F.p


def vec_add(F, u, v):
    return (u + v) % F.p


def vec_sub(F, u, v):
    return (u - v) % F.p


class Echelon:
    """Incremental row space in reduced echelon form (for spin-up closures)."""

    def __init__(self, F, width):
        self.F = F
        self.width = width
        self.rows = {}  # pivot index -> (width, k) digit array with unit pivot

    def reduce(self, v):
        F = self.F
        v = v % F.p
        for piv, row in self.rows.items():
            c = v[piv]
            if c.any():
                v = (v - (row @ F.digit_matrix(int(F.array_to_codes(c))))) % F.p
        return v

    def insert(self, v):
        """Reduce v; if independent, add it and return True."""
        F = self.F
        v = self.reduce(v)
        nz = np.nonzero(v.any(axis=-1))[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        code = int(F.array_to_codes(v[piv]))
        v = (v @ F.digit_matrix(F.inv(code))) % F.p
        # back-substitute into existing rows
        for other_piv in list(self.rows):
            row = self.rows[other_piv]
            c = row[piv]
            if c.any():
                self.rows[other_piv] = (row - (v @ F.digit_matrix(
                    int(F.array_to_codes(c))))) % F.p
        self.rows[piv] = v
        return True

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, v):
        return not self.reduce(v).any()

    def basis(self):
        return [self.rows[p] for p in sorted(self.rows)]
