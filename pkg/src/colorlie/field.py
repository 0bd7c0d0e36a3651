"""Exact arithmetic in F_{p^k}.

Scalars are integer codes in [0, p^k): the little-endian base-p digits of a
code are the coefficients of the residue polynomial modulo the stored
irreducible modulus.  That digit vector is also the wire format used by the
CLI.  Small fields get full add/mul lookup tables so bulk code stays cheap.
"""

import numpy as np

from .errors import BadCharacteristic, NonPrime, ReducibleModulus

LUT_LIMIT = 2048  # build full q x q tables only below this size


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (little-endian int-coefficient lists)
# ---------------------------------------------------------------------------

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f, g, mod, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pmod(out, mod, p)


def _pmod(f, mod, p):
    f = list(f)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p)
    while len(f) > dm:
        c = (f[-1] * inv_lead) % p
        if c:
            for i in range(dm + 1):
                f[len(f) - 1 - dm + i] = (f[len(f) - 1 - dm + i] - c * mod[i]) % p
        f.pop()
    return _ptrim(f)


def _ppowmod(f, e, mod, p):
    result = [1]
    base = _pmod(f, mod, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _pgcd(f, g, p):
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f, g = g, _pmod(f, g, p)
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [(c * inv) % p for c in f]
    return f


def _psub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _ptrim([(a - b) % p for a, b in zip(f, g)])


def _irreducible_fp(f, p):
    """Exact irreducibility of a monic degree-k polynomial over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^k) == x mod f
    t = x
    for _ in range(k):
        t = _ppowmod(t, p, f, p)
    if _psub(t, x, p):
        return False
    # gcd(x^(p^(k/r)) - x, f) == 1 for every prime r | k
    primes, kk, r = set(), k, 2
    while kk > 1:
        while kk % r == 0:
            primes.add(r)
            kk //= r
        r += 1
    for r in primes:
        t = x
        for _ in range(k // r):
            t = _ppowmod(t, p, f, p)
        if len(_pgcd(_psub(t, x, p), f, p)) != 1:
            return False
    return True


class Field:
    """F_{p^k} with int-code scalars and an explicit little-endian modulus."""

    def __init__(self, p, k=1, modulus=None):
        if not _is_prime(p):
            raise NonPrime("p = %r is not prime" % (p,))
        if p <= 3:
            raise BadCharacteristic("characteristic must exceed 3, got %d" % p)
        if k < 1:
            raise BadCharacteristic("extension degree must be >= 1, got %d" % k)
        self.p = p
        self.k = k
        self.q = p ** k
        if modulus is None:
            modulus = self._find_modulus(p, k)
        else:
            modulus = [c % p for c in modulus]
            if len(modulus) != k + 1 or modulus[-1] == 0:
                raise ReducibleModulus("modulus must be monic of degree exactly %d" % k)
            if not _irreducible_fp(modulus, p):
                raise ReducibleModulus("modulus %r is reducible over F_%d" % (modulus, p))
        self.modulus = tuple(modulus)
        self.zero = 0
        self.one = 1
        self._powers = [p ** i for i in range(k)]
        self._build_tables()

    @staticmethod
    def _find_modulus(p, k):
        # lexicographically first monic irreducible, scanning the little-endian
        # lower-coefficient vector as a base-p counter
        for code in range(p ** k):
            f = [(code // p ** i) % p for i in range(k)] + [1]
            if _irreducible_fp(f, p):
                return f
        raise ReducibleModulus("no irreducible polynomial found")  # unreachable

    # -- scalar codec ------------------------------------------------------

    def to_digits(self, a):
        return tuple((a // pw) % self.p for pw in self._powers)

    def from_digits(self, digits):
        if len(digits) != self.k:
            raise ValueError("expected %d digits, got %r" % (self.k, digits))
        return sum((int(d) % self.p) * pw for d, pw in zip(digits, self._powers))

    def to_wire(self, a):
        return list(self.to_digits(a))

    def from_wire(self, lst):
        return self.from_digits(lst)

    def embed(self, n):
        """Image of the rational integer n in the prime field."""
        return int(n) % self.p

    def elements(self):
        return range(self.q)

    # -- arithmetic --------------------------------------------------------

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        if q <= LUT_LIMIT:
            codes = np.arange(q, dtype=np.int64)
            digits = np.stack([(codes // pw) % p for pw in self._powers], axis=1)
            add_digits = (digits[:, None, :] + digits[None, :, :]) % p
            self._add = (add_digits * np.array(self._powers)).sum(axis=2).astype(np.int64)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    v = self._mul_poly(a, b)
                    mul[a, b] = v
                    mul[b, a] = v
            self._mul = mul
            self._neg = self._add_inverse_table()
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = int(pow_code(self, a, q - 2))
            self._inv = inv
        else:
            self._add = self._mul = self._neg = self._inv = None

    def _add_inverse_table(self):
        p = self.p
        codes = np.arange(self.q, dtype=np.int64)
        digits = np.stack([(codes // pw) % p for pw in self._powers], axis=1)
        neg = (p - digits) % p
        return (neg * np.array(self._powers)).sum(axis=1).astype(np.int64)

    def _mul_poly(self, a, b):
        p = self.p
        fa = list(self.to_digits(a))
        fb = list(self.to_digits(b))
        prod = _pmulmod(_ptrim(fa), _ptrim(fb), list(self.modulus), p)
        prod += [0] * (self.k - len(prod))
        return self.from_digits(prod[: self.k])

    def add(self, a, b):
        if self._add is not None:
            return int(self._add[a, b])
        return self.from_digits([(x + y) % self.p
                                 for x, y in zip(self.to_digits(a), self.to_digits(b))])

    def neg(self, a):
        if self._neg is not None:
            return int(self._neg[a])
        return self.from_digits([(-x) % self.p for x in self.to_digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul is not None:
            return int(self._mul[a, b])
        return self._mul_poly(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.q)
        if self._inv is not None:
            return int(self._inv[a])
        return pow_code(self, a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        e = int(e)
        if e < 0:
            return pow_code(self, self.inv(a), -e)
        return pow_code(self, a, e)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def pth_root(self, a):
        # Frobenius has order k, so a^(p^(k-1)) is the unique p-th root
        return self.pow(a, self.p ** (self.k - 1))

    def trace_to_prime(self, a):
        t = 0
        x = a
        for _ in range(self.k):
            t = self.add(t, x)
            x = self.frobenius(x)
        return t

    def artin_schreier_solutions(self, c):
        """All a with a^p - a = c (either empty or a coset of F_p)."""
        return [a for a in self.elements() if self.sub(self.pow(a, self.p), a) == c]

    # -- numpy digit-array helpers (used by the linear algebra layer) ------

    def codes_to_array(self, rows):
        """list-of-lists of codes -> (r, c, k) digit array"""
        arr = np.asarray(rows, dtype=np.int64)
        out = np.stack([(arr // pw) % self.p for pw in self._powers], axis=-1)
        return out

    def array_to_codes(self, arr):
        return (arr * np.array(self._powers)).sum(axis=-1).astype(np.int64)

    @property
    def mul_tensor(self):
        """T[i, j, l]: digit l of x^i * x^j mod modulus."""
        t = getattr(self, "_mul_tensor", None)
        if t is None:
            k = self.k
            t = np.zeros((k, k, k), dtype=np.int64)
            for i in range(k):
                for j in range(k):
                    prod = _pmulmod([0] * i + [1], [0] * j + [1],
                                    list(self.modulus), self.p)
                    prod += [0] * (k - len(prod))
                    t[i, j, :] = prod[:k]
            self._mul_tensor = t
        return t

    def digit_matrix(self, a):
        """(k, k) matrix M with digits(a*b) = digits(b) @ M mod p."""
        return np.tensordot(np.array(self.to_digits(a)), self.mul_tensor,
                            axes=(0, 0)) % self.p

    # -- polynomial utilities over this field (little-endian code lists) ---

    def poly_trim(self, f):
        f = list(f)
        while f and f[-1] == 0:
            f.pop()
        return f

    def poly_add(self, f, g):
        n = max(len(f), len(g))
        f = list(f) + [0] * (n - len(f))
        g = list(g) + [0] * (n - len(g))
        return self.poly_trim([self.add(a, b) for a, b in zip(f, g)])

    def poly_scale(self, f, c):
        return self.poly_trim([self.mul(a, c) for a in f])

    def poly_mul(self, f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self.poly_trim(out)

    def poly_divmod(self, f, g):
        f = self.poly_trim(f)
        g = self.poly_trim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        quot = [0] * max(0, len(f) - len(g) + 1)
        inv_lead = self.inv(g[-1])
        rem = list(f)
        while len(rem) >= len(g) and rem:
            c = self.mul(rem[-1], inv_lead)
            d = len(rem) - len(g)
            quot[d] = c
            for i in range(len(g)):
                rem[d + i] = self.sub(rem[d + i], self.mul(c, g[i]))
            rem = self.poly_trim(rem)
        return quot, rem

    def poly_gcd(self, f, g):
        f, g = self.poly_trim(f), self.poly_trim(g)
        while g:
            f, g = g, self.poly_divmod(f, g)[1]
        if f:
            f = self.poly_scale(f, self.inv(f[-1]))
        return f

    def poly_powmod(self, f, e, mod):
        result = [1]
        base = self.poly_divmod(f, mod)[1]
        while e:
            if e & 1:
                result = self.poly_divmod(self.poly_mul(result, base), mod)[1]
            base = self.poly_divmod(self.poly_mul(base, base), mod)[1]
            e >>= 1
        return result

    def poly_eval(self, f, x):
        acc = 0
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_roots(self, f):
        """Roots in this field, with multiplicity, by exhaustive scan."""
        f = self.poly_trim(f)
        roots = []
        for a in self.elements():
            if self.poly_eval(f, a) == 0:
                m = 0
                g = f
                while True:
                    quot, rem = self.poly_divmod(g, [self.neg(a), 1])
                    if rem:
                        break
                    m += 1
                    g = quot
                roots.append((a, m))
        return roots

    def poly_derivative(self, f):
        return self.poly_trim([self.mul(self.embed(i), c)
                               for i, c in enumerate(f)][1:])

    def splitting_degree(self, f):
        """lcm of the degrees of the irreducible factors of f over this field."""
        from math import lcm

        f = self.poly_trim(f)
        if len(f) <= 1:
            return 1
        f = self.poly_scale(f, self.inv(f[-1]))
        # strip repeated factors; in char p the derivative may vanish
        d = self.poly_derivative(f)
        if not d:
            # f(x) = g(x^p) = h(x)^p with h's coefficients the p-th roots of g's
            h = [self.pth_root(c) for c in f[:: self.p]]
            return self.splitting_degree(h)
        f = self.poly_divmod(f, self.poly_gcd(f, d))[0]
        degree = 1
        x = [0, 1]
        t = x
        deg = 1
        while len(f) > 1:
            t = self.poly_powmod(t, self.q, f)
            diff = self.poly_add(t, self.poly_scale(x, self.neg(1)))
            g = self.poly_gcd(f, diff)
            if len(g) > 1:
                degree = lcm(degree, deg)
                f = self.poly_divmod(f, g)[0]
                t = self.poly_divmod(t, f)[1] if len(f) > 1 else t
            deg += 1
        return degree

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return "Field(p=%d, k=%d, modulus=%s)" % (self.p, self.k, list(self.modulus))


def pow_code(F, a, e):
    result = F.one
    base = a
    e = int(e)
    while e:
        if e & 1:
            result = F.mul(result, base)
        base = F.mul(base, base)
        e >>= 1
    return result


def field_make(p, k=1, modulus=None):
    """Construct F_{p^k}, finding a deterministic modulus when none is given."""
    return Field(p, k, modulus)
