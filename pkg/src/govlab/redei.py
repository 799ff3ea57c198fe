"""Redei symbols: Artin symbols of the quadratic extensions cut out by
conic solutions, valued in (1/2)Z/Z.

For squarefree a, b with (a, b)_v = +1 everywhere, a normalized solution
of x^2 - a y^2 = b z^2 generates L = K(sqrt(x + y sqrt a)) over
K = Q(sqrt a, sqrt b).  The symbol of an ideal of norm |n| in L/K is a
sum of local Frobenius classes over the primes of n; under the dihedral
reciprocity hypotheses (one of the two "norm sides" positive and 1 mod 8,
coprime to the rest) the value does not depend on the solution chosen,
and swapping the roles of the two norm sides leaves it unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import (
    hilbert,
    is_ext2_square,
    is_q2_square,
    kronecker,
    prime_divisors,
    relevant_places,
    sqrt_mod,
    sqrt_z2,
    square_class,
    v2,
)
from .conic import (
    ConicSolution,
    LocalObstruction,
    conic_solutions,
    is_unramified_outside,
    normalize_for_redei,
    ramified_in_both,
    solve_conic,
)


class HypothesisViolation(Exception):
    """The requested symbol is not well defined outside the reciprocity
    hypotheses; we refuse to extend by guesswork."""


@dataclass(frozen=True)
class HalfSymbol:
    """An element of (1/2)Z/Z: 0 or 1/2, written additively."""

    half: int  # 0 or 1; the value is half/2

    def __post_init__(self):
        object.__setattr__(self, "half", self.half & 1)

    def __add__(self, other: "HalfSymbol") -> "HalfSymbol":
        return HalfSymbol(self.half ^ int(other))

    def __int__(self) -> int:
        return self.half

    def __str__(self) -> str:
        return "1/2" if self.half else "0"


@dataclass(frozen=True)
class RedeiField:
    """The data of L_{a,b} = Q(sqrt a, sqrt b, sqrt(x + y sqrt a))."""

    a: int
    b: int
    sol: ConicSolution
    conductor_support: frozenset[int]

    def __repr__(self) -> str:
        s = self.sol
        return f"RedeiField({self.a}, {self.b}; delta = {s.x} + {s.y}*sqrt({self.a}))"


@lru_cache(maxsize=200_000)
def build_redei_field(a, b) -> RedeiField:
    """Canonical normalized field for the pair (a, b); deterministic."""
    a, b = square_class(int(a)), square_class(int(b))
    if a == 1 or b == 1:
        raise HypothesisViolation("the pair must consist of nonsquare classes")
    sol = normalize_for_redei(solve_conic(a, b))
    return RedeiField(a, b, sol, frozenset(ramified_in_both(a, b)))


def alternate_redei_field(a: int, b: int) -> RedeiField | None:
    """A second normalized field for (a, b) from a different solution, when
    one exists among the first few; used to test well-definedness."""
    main = build_redei_field(a, b)
    for cand in conic_solutions(main.a, main.b, 40):
        if (cand.x, cand.y, cand.z) == (main.sol.x, main.sol.y, main.sol.z):
            continue
        if is_unramified_outside(cand):
            return RedeiField(main.a, main.b, cand, main.conductor_support)
    return None


# ---------------------------------------------------------------------------
# local symbols


def _local_odd_split(sol: ConicSolution, q: int) -> int:
    """Frobenius at a prime over odd q with (a|q) = (b|q) = +1, q coprime
    to a, b and the solution's bad primes."""
    a = sol.a
    s = sqrt_mod(a % q, q)
    u = (sol.x + sol.y * s) % q
    if u == 0:
        u = (sol.x - sol.y * s) % q  # conjugate; (x,y,z) primitive keeps it nonzero
    return 0 if kronecker(u, q) == 1 else 1


def _local_odd_ramified(sol: ConicSolution, q: int) -> int:
    """Frobenius at the ramified prime over odd q | a (with q coprime to b).

    Here sqrt(a) is a uniformizer; stripping q^w from x leaves a unit
    residue, and each stripped q contributes the class of a/q.
    """
    x, y = sol.x, sol.y
    w = 0
    while x % q == 0:
        x //= q
        w += 1
    if y % (q**w):
        raise HypothesisViolation(f"unexpected valuations at {q}")
    sym = kronecker(x, q)
    if w & 1:
        sym *= kronecker(sol.a // q, q)
    return 0 if sym == 1 else 1


def _local_two(sol: ConicSolution) -> int:
    """Frobenius at a prime over 2 (requires b = 1 mod 8 so that the
    completions of K at 2 are copies of Q_2(sqrt a))."""
    a, x, y = sol.a, sol.x, sol.y
    if is_q2_square(a):
        prec = (v2(x * x - a * y * y) if y else 0) + 16
        s = sqrt_z2(a % (1 << (prec + 3)), prec)
        mod = 1 << prec
        vals = []
        for eps in (s, -s):
            d = (x + y * eps) % mod if y else x
            vd = v2(d)
            vals.append(0 if vd % 2 == 0 and ((d >> vd) % 8) == 1 else 1)
        if vals[0] != vals[1]:
            raise HypothesisViolation("conjugate primes over 2 disagree")
        return vals[0]
    return 0 if is_ext2_square(x, y, a) else 1


def _role_hypotheses_ok(a: int, b: int, n: int) -> bool:
    """Prop-style triple hypotheses with (b, n) in either order: one of the
    two must be positive, 1 mod 8, and coprime to both others."""
    for c, other in ((n, b), (b, n)):
        if c > 0 and c % 8 == 1 and math.gcd(c, a) == 1 and math.gcd(c, other) == 1:
            return True
    return False


def artin_symbol(field: RedeiField, n) -> HalfSymbol:
    """[L/K, ideal of norm |n|] in (1/2)Z/Z, summed over the primes of n.

    Raises HypothesisViolation unless the triple (a, b, n) satisfies the
    reciprocity hypotheses, which are exactly what makes the value
    independent of the solution inside the field data.
    """
    n = square_class(int(n))
    a, b = field.a, field.b
    if n == 1:
        return HalfSymbol(0)
    if abs(n) == 1:
        raise HypothesisViolation("ideal norms are positive; class of -1 invalid")
    if math.gcd(n, b) != 1:
        raise HypothesisViolation("evaluation argument must be coprime to b")
    if any(q in field.conductor_support for q in prime_divisors(n)):
        raise HypothesisViolation("argument meets the conductor support")
    if not _role_hypotheses_ok(a, b, n):
        raise HypothesisViolation("no admissible 1 mod 8 role in the triple")
    for v in relevant_places(a, n):
        if hilbert(a, n, v) != 1:
            raise HypothesisViolation(f"(a, n) fails at {v}")
    for v in relevant_places(b, n):
        if hilbert(b, n, v) != 1:
            raise HypothesisViolation(f"(b, n) fails at {v}")
    total = 0
    for q in prime_divisors(n):
        if q == 2:
            total ^= _local_two(field.sol)
        elif a % q == 0:
            total ^= _local_odd_ramified(field.sol, q)
        else:
            total ^= _local_odd_split(field.sol, q)
    return HalfSymbol(total)


def check_reciprocity(a, b, c) -> bool:
    """Verify [L_{a,b}/K_{a,b}, c] = [L_{a,c}/K_{a,c}, b].

    The hypotheses (c positive, 1 mod 8, coprime to a and b; all three
    pairwise Hilbert symbols +1 everywhere) are checked, not assumed.
    """
    a, b, c = (square_class(int(t)) for t in (a, b, c))
    if 1 in (a, b, c):
        raise HypothesisViolation("all three classes must be nonsquare")
    if c <= 0 or c % 8 != 1 or math.gcd(c, a * b) != 1:
        raise HypothesisViolation("c must be positive, 1 mod 8, coprime to ab")
    for x, y in ((a, b), (a, c), (b, c)):
        for v in relevant_places(x, y):
            if hilbert(x, y, v) != 1:
                raise HypothesisViolation(f"({x}, {y}) fails at {v}")
    lhs = artin_symbol(build_redei_field(a, b), c)
    rhs = artin_symbol(build_redei_field(a, c), b)
    return int(lhs) == int(rhs)


def reciprocity_sides(a: int, b: int, c: int) -> tuple[HalfSymbol, HalfSymbol]:
    """Both sides of the reciprocity law, for reporting."""
    lhs = artin_symbol(build_redei_field(a, b), c)
    rhs = artin_symbol(build_redei_field(a, c), b)
    return lhs, rhs


def valid_triple(a: int, b: int, c: int) -> bool:
    """Do (a, b, c) satisfy the reciprocity hypotheses?"""
    a, b, c = (square_class(t) for t in (a, b, c))
    if 1 in (a, b, c) or c <= 0 or c % 8 != 1 or math.gcd(c, a * b) != 1:
        return False
    return all(
        hilbert(x, y, v) == 1
        for x, y in ((a, b), (a, c), (b, c))
        for v in relevant_places(x, y)
    )
