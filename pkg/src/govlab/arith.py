"""Exact integer and local arithmetic primitives.

Kronecker symbols, Hilbert symbols at every place of Q (including an
exact 2-adic square-class engine for Q_2 and its quadratic extensions),
factorization, square roots mod p, and prime sieving.  All functions are
pure; the shared sieve is built once and only read afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

# ---------------------------------------------------------------------------
# primes and factorization

_SIEVE_LIMIT = 1 << 16
_sieve_primes: list[int] = []


def _build_sieve(limit: int) -> None:
    global _SIEVE_LIMIT, _sieve_primes, _is_prime_table
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    _is_prime_table = sieve
    _sieve_primes = [i for i in range(limit + 1) if sieve[i]]
    _SIEVE_LIMIT = limit


_is_prime_table = bytearray()
_build_sieve(_SIEVE_LIMIT)


def primes_upto(n: int) -> list[int]:
    """Ascending primes <= n (simple sieve, grown on demand)."""
    if n > _SIEVE_LIMIT:
        _build_sieve(max(n, 2 * _SIEVE_LIMIT))
    primes = _sieve_primes
    if n >= primes[-1]:
        return primes[:]
    # binary search for the cut
    lo, hi = 0, len(primes)
    while lo < hi:
        mid = (lo + hi) // 2
        if primes[mid] <= n:
            lo = mid + 1
        else:
            hi = mid
    return primes[:lo]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond 64 bits of input here)."""
    if n < 2:
        return False
    if n <= _SIEVE_LIMIT:
        return bool(_is_prime_table[n])
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; n odd composite, not a prime power of a tiny prime.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@lru_cache(maxsize=100_000)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as ((p, e), ...), ascending in p.

    Trial division below 10^6, Pollard rho above; inputs in scope stay
    far below anything needing a subexponential method.
    """
    n = abs(n)
    if n <= 1:
        return ()
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p < 1_000_000:
        if n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        else:
            p += wheel[i]
            i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return tuple(sorted(out.items()))


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factor(n)]


def squarefree_part(n: int) -> tuple[int, int]:
    """n = s * f^2 with s squarefree (sign carried by s).  Requires n != 0."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    s = -1 if n < 0 else 1
    f = 1
    for p, e in factor(n):
        if e & 1:
            s *= p
        f *= p ** (e // 2)
    return s, f


def is_squarefree(n: int) -> bool:
    return n != 0 and squarefree_part(n)[0] == n


# ---------------------------------------------------------------------------
# square classes and places


@dataclass(frozen=True)
class SquareClass:
    """A class in Q^x/(Q^x)^2, stored as its signed squarefree representative."""

    value: int

    def __post_init__(self):
        if self.value == 0:
            raise ValueError("square class of 0 is undefined")
        object.__setattr__(self, "value", squarefree_part(self.value)[0])

    def __mul__(self, other) -> "SquareClass":
        return SquareClass(self.value * int(other))

    __rmul__ = __mul__

    def __int__(self) -> int:
        return self.value

    def is_trivial(self) -> bool:
        return self.value == 1

    def __repr__(self) -> str:
        return f"SquareClass({self.value})"


def square_class(n: int) -> int:
    """Signed squarefree representative of n in Q^x/(Q^x)^2."""
    return squarefree_part(n)[0]


@dataclass(frozen=True)
class Place:
    """A place of Q: the real place, 2, or an odd prime."""

    p: int  # 0 encodes the real place

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p == 0

    def __repr__(self) -> str:
        return "Place(oo)" if self.p == 0 else f"Place({self.p})"


INFINITY = Place(0)


# ---------------------------------------------------------------------------
# Kronecker and Hilbert symbols


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), fully multiplicative in both arguments."""
    if n == 0:
        raise ValueError("kronecker requires n != 0")
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    t = 1
    # factor out 2s of n
    z = (n & -n).bit_length() - 1
    n >>= z
    if z:
        if a & 1 == 0:
            return 0
        if z & 1 and a % 8 in (3, 5):
            t = -t
    a %= n
    # binary Jacobi on odd n
    while a:
        while a & 1 == 0:
            a >>= 1
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    return (n & -n).bit_length() - 1


def hilbert(a, b, v=None) -> int:
    """Hilbert symbol (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a
    nontrivial solution over Q_v.

    ``v`` is a Place, an int prime, or 0/INFINITY for the real place.
    """
    a, b = int(a), int(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    p = v.p if isinstance(v, Place) else int(v)
    if p == 0:
        return -1 if (a < 0 and b < 0) else 1
    if p == 2:
        al, u = v2(a), a >> v2(a)
        be, w = v2(b), b >> v2(b)
        e = ((u - 1) // 2) * ((w - 1) // 2)
        e += al * ((w * w - 1) // 8) + be * ((u * u - 1) // 8)
        return -1 if e & 1 else 1
    al, u = _vp(a, p), a
    u //= p**al
    be, w = _vp(b, p), b
    w //= p**be
    s = 1
    if al & 1 and be & 1 and p % 4 == 3:
        s = -s
    if be & 1 and kronecker(u, p) < 0:
        s = -s
    if al & 1 and kronecker(w, p) < 0:
        s = -s
    return s


def relevant_places(*nums: int) -> list[Place]:
    """The real place, 2, and every odd prime dividing one of the arguments."""
    ps: set[int] = set()
    for n in nums:
        ps.update(p for p in prime_divisors(n) if p % 2)
    return [INFINITY, Place(2)] + [Place(p) for p in sorted(ps)]


def hilbert_everywhere(a: int, b: int) -> bool:
    """True iff (a, b)_v = +1 at every place of Q."""
    return all(hilbert(a, b, v) == 1 for v in relevant_places(a, b))


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a mod odd prime p (Tonelli-Shanks); raises if none."""
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    if p % 8 == 5:
        x = pow(a, (p + 3) // 8, p)
        if x * x % p != a:
            x = x * pow(2, (p - 1) // 4, p) % p
        return x
    # general Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def prime_family(N: int, modulus: int, residue_set) -> list[int]:
    """Ascending primes p < N with p mod modulus in residue_set."""
    if N < 2 or modulus < 1:
        raise ValueError("need N >= 2 and modulus >= 1")
    residues = {r % modulus for r in residue_set}
    return [p for p in primes_upto(N - 1) if p % modulus in residues]


# ---------------------------------------------------------------------------
# exact 2-adic square classes
#
# Everything below works with exact rationals represented as int pairs,
# so there are no precision surprises: valuations are computed from the
# integers themselves and unit parts are reduced mod a power of 2 only
# at the end.


def _odd_part(n: int) -> int:
    return n >> v2(n)


def is_q2_square(num: int, den: int = 1) -> bool:
    """Is the nonzero rational num/den a square in Q_2?"""
    if num == 0:
        raise ValueError("0 is not in Q_2^x")
    v = v2(num) - v2(den)
    if v & 1:
        return False
    u = _odd_part(abs(num)) * (-1 if (num < 0) != (den < 0) else 1)
    u *= _odd_part(abs(den))  # den's odd part squared cancels mod squares
    return u % 8 == 1


def sqrt_z2(u: int, prec: int) -> int:
    """Square root mod 2^prec of an integer u = 1 mod 8."""
    if u % 8 != 1:
        raise ValueError("2-adic square root needs u = 1 mod 8")
    r, k = 1, 3  # invariant: r^2 = u mod 2^k, r odd
    while k < prec:
        if (r * r - u) % (1 << (k + 1)):
            r += 1 << (k - 1)
        k += 1
    return r % (1 << prec)


def sqrt_q2(num: int, prec: int) -> tuple[int, int]:
    """2-adic square root of a square integer: returns (root mod 2^prec-ish, v2/2).

    The root is odd * 2^(v2/2); we return (odd root mod 2^prec, half-valuation).
    """
    v = v2(num)
    u = num >> v
    return sqrt_z2(u % (1 << (prec + 3)), prec), v // 2


def is_ext2_square(alpha: int, beta: int, a: int) -> bool:
    """Is alpha + beta*sqrt(a) a square in the 2-adic field Q_2(sqrt(a))?

    Requires a to be a nonsquare in Q_2 (so the extension is a field) and
    (alpha, beta) integers, not both zero.
    """
    if beta == 0:
        return is_q2_square(alpha) or is_q2_square(alpha * a)
    norm = alpha * alpha - a * beta * beta
    if norm == 0:
        raise ValueError("a is a rational square; not a quadratic extension")
    if not is_q2_square(norm):
        return False
    # norm = r^2; xi is a square iff (alpha +- r)/2 is a square in Q_2.
    # v2(alpha+r) + v2(alpha-r) = v2(a*beta^2), so precision is bounded.
    bound = v2(a * beta * beta)
    prec = bound + 16
    r_odd, half = sqrt_q2(norm, prec)
    r = r_odd << half
    mod = 1 << (bound + 8)
    for c in (r, -r):
        t = (alpha + c) % mod
        if t == 0:
            # exact cancellation is impossible (norm != alpha^2); the
            # residue is zero only through lost precision, which the
            # bound above rules out
            continue
        vt = v2(t)
        if vt > bound:
            continue  # this is the huge-valuation sibling; use the other sign
        # (alpha + c)/2: valuation vt - 1, odd part u
        u = (t >> vt) % 8
        if (vt - 1) % 2 == 0 and u == 1:
            return True
    return False


def ext2_square_class_tests(delta_x: int, delta_y: int, a: int, multipliers) -> bool:
    """True iff (delta_x + delta_y*sqrt(a)) * t is a square in Q_2(sqrt(a))
    for some t in multipliers (integers)."""
    return any(is_ext2_square(delta_x * t, delta_y * t, a) for t in multipliers)
