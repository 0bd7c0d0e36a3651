"""Quantum binomial coefficients.

Q^i_n is computed as an integer polynomial in q through the q-Pascal
recursion Q^i_n = Q^i_{n-1} + q^{n-i} Q^{i-1}_{n-1} and then evaluated at
the field point, so roots of unity need no cancellation bookkeeping and the
value is defined for every q.
"""

from functools import lru_cache


@lru_cache(maxsize=None)
def _qbinom_poly(n, i):
    """Integer coefficient tuple (ascending powers of q) of Q^i_n."""
    if i < 0 or i > n:
        return (0,)
    if i == 0 or i == n:
        return (1,)
    a = _qbinom_poly(n - 1, i)
    b = _qbinom_poly(n - 1, i - 1)
    shifted = (0,) * (n - i) + b
    out = [0] * max(len(a), len(shifted))
    for k, c in enumerate(a):
        out[k] += c
    for k, c in enumerate(shifted):
        out[k] += c
    return tuple(out)


def quantum_binomial(F, n, i, q):
    """Q^i_n evaluated at the scalar q in the field F."""
    if not 0 <= i <= n:
        return F.zero
    acc = F.zero
    for c in reversed(_qbinom_poly(n, i)):
        acc = F.add(F.mul(acc, q), F.embed(c))
    return acc


def quantum_integer(F, n, q):
    """[n]_q = 1 + q + ... + q^(n-1)."""
    acc = F.zero
    power = F.one
    for _ in range(n):
        acc = F.add(acc, power)
        power = F.mul(power, q)
    return acc
