"""Exact integer arithmetic and the (p, q) parameterization.

Everything here is plain 64-bit-scale integer math: deterministic trial
division, multiplicative orders, Euler phi, divisor lists.  The central
object is :class:`PqParams`, which records how p-1 and q-1 factor into a
q-power part and shared odd-prime parts; every other module consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt


class UniqueStructureRegime(Exception):
    """Signal (not a failure): q does not divide p-1.

    In this regime the degree-pq extension carries exactly one
    Hopf-Galois structure (cyclic type, almost classically Galois), so no
    enumeration is ever run.  Callers catch this and emit the single
    record directly.
    """

    def __init__(self, p: int, q: int):
        super().__init__(f"q={q} does not divide p-1={p - 1}: unique-structure regime")
        self.p = p
        self.q = q


class ResourceLimitError(RuntimeError):
    """An enumeration or search exceeded its configured cap."""


class ClassificationError(RuntimeError):
    """An internal classification invariant failed (e.g. a non-integral
    Byott quotient or a class matching no closed-form rule)."""


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (desk scale)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    r = isqrt(n)
    while i <= r:
        if n % i == 0:
            return False
        i += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(prime, exponent), ...], primes increasing."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 2
    if m > 1:
        out.append((m, 1))
    return out


def euler_phi(n: int) -> int:
    """Euler totient of n >= 1."""
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n >= 1."""
    if n < 1:
        raise ValueError(f"divisors requires n >= 1, got {n}")
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def sigma0(n: int) -> int:
    """Number of divisors of n >= 1."""
    count = 1
    for _, e in factorize(n):
        count *= e + 1
    return count


def mult_order(a: int, modulus: int) -> int:
    """Smallest k >= 1 with a^k = 1 mod modulus (modulus prime)."""
    a %= modulus
    if a == 0:
        raise ValueError(f"{a} is not a unit mod {modulus}")
    # order divides modulus-1; strip primes from the group exponent
    order = modulus - 1
    for p, _ in factorize(modulus - 1):
        while order % p == 0 and pow(a, order // p, modulus) == 1:
            order //= p
    return order


def element_of_order(r: int, p: int, rank: int = 0) -> int:
    """The (rank+1)-th smallest a in [1, p-1] of multiplicative order r mod p.

    rank=0 gives the canonical (smallest) witness used throughout; rank=1
    exists only so invariance tests can re-run a classification with a
    different generator choice.
    """
    if r < 1 or (p - 1) % r != 0:
        raise ValueError(f"order {r} does not divide p-1={p - 1}")
    found = 0
    for a in range(1, p):
        if mult_order(a, p) == r:
            if found == rank:
                return a
            found += 1
    raise ValueError(f"no element of order {r} mod {p} at rank {rank}")


@dataclass(frozen=True)
class PqParams:
    """Arithmetic skeleton of a valid (p, q) pair.

    p - 1 = q^e0 * prod(ell[i]^e[i]) and q - 1 = prod(ell[i]^f[i]), with the
    ell[i] the distinct primes != q dividing (p-1)(q-1), and
    s = (p-1) / q^e0.
    """

    p: int
    q: int
    e0: int
    ell: tuple[int, ...]
    e: tuple[int, ...]
    f: tuple[int, ...]
    s: int

    def __post_init__(self):
        lhs = self.q**self.e0
        for ell_i, e_i in zip(self.ell, self.e):
            lhs *= ell_i**e_i
        if lhs != self.p - 1:
            raise ValueError("p-1 does not reconstruct from parameters")
        rhs = 1
        for ell_i, f_i in zip(self.ell, self.f):
            rhs *= ell_i**f_i
        if rhs != self.q - 1:
            raise ValueError("q-1 does not reconstruct from parameters")
        if self.e0 < 1:
            raise ValueError("e0 must be positive")
        if len(set(self.ell)) != len(self.ell) or self.q in self.ell:
            raise ValueError("ell must be distinct primes != q")
        if any(max(e_i, f_i) < 1 for e_i, f_i in zip(self.e, self.f)):
            raise ValueError("every ell must divide p-1 or q-1")
        if self.s * self.q**self.e0 != self.p - 1:
            raise ValueError("s must equal (p-1)/q^e0")

    @property
    def m(self) -> int:
        return len(self.ell)

    @property
    def degree(self) -> int:
        return self.p * self.q


def pq_parameters(p: int, q: int) -> PqParams:
    """Build PqParams for distinct odd primes p > q.

    Raises UniqueStructureRegime when q does not divide p-1 (the caller
    then reports the single cyclic-type structure) and ValueError on
    invalid input.
    """
    if not (is_prime(p) and is_prime(q)):
        raise ValueError(f"p={p} and q={q} must both be prime")
    if p <= q or q < 3 or p == q:
        raise ValueError(f"need odd primes p > q, got p={p}, q={q}")
    if p >= 1 << 16:
        raise ValueError(f"p={p} exceeds the supported range (p < 2^16)")
    if (p - 1) % q != 0:
        raise UniqueStructureRegime(p, q)

    e0 = 0
    rest = p - 1
    while rest % q == 0:
        rest //= q
        e0 += 1
    s = rest

    ells = sorted(set(x for x, _ in factorize(rest)) | set(x for x, _ in factorize(q - 1)))
    e_exps, f_exps = [], []
    for ell_i in ells:
        e_i = 0
        t = p - 1
        while t % ell_i == 0:
            t //= ell_i
            e_i += 1
        f_i = 0
        t = q - 1
        while t % ell_i == 0:
            t //= ell_i
            f_i += 1
        e_exps.append(e_i)
        f_exps.append(f_i)
    return PqParams(p=p, q=q, e0=e0, ell=tuple(ells), e=tuple(e_exps), f=tuple(f_exps), s=s)


def geometric_sum(ell: int, k: int) -> int:
    """1 + ell + ... + ell^(k-1), the integer value of (ell^k - 1)/(ell - 1)."""
    if k <= 0:
        return 0
    return (ell**k - 1) // (ell - 1)


__all__ = [
    "ClassificationError",
    "PqParams",
    "ResourceLimitError",
    "UniqueStructureRegime",
    "divisors",
    "element_of_order",
    "euler_phi",
    "factorize",
    "gcd",
    "geometric_sum",
    "is_prime",
    "mult_order",
    "pq_parameters",
    "sigma0",
]
