"""Governing machinery for 8-class ranks.

For a negative d and anchor prime p0 with d*p0 a fundamental
discriminant, the divisor classes of d satisfying the right Hilbert
conditions form two F2 spaces (ideal side and character side) that are
stable across every prime p with p*p0 a square mod 8d.  The pairing
matrix built from Redei symbols at the anchor then transports to any
such p by adding Artin-symbol corrections of the fixed fields L_{a,b}
at the squarefree part of p*p0 -- O(m^2) Legendre evaluations per prime,
no class group in sight.  Coranks of the transported matrices are the
8-class rank predictions, which the classgroup oracle must reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import gf2
from .arith import (
    hilbert,
    INFINITY,
    Place,
    is_prime,
    kronecker,
    prime_divisors,
    primes_upto,
    square_class,
)
from .classgroup import (
    NotFundamental,
    eight_rank_oracle,
    form_for_divisor,
    is_fundamental,
    redei_matrix_4rank,
)
from .redei import HypothesisViolation, RedeiField, artin_symbol, build_redei_field


class NonGeneric(Exception):
    """Transport requires the two divisor spaces to be disjoint."""


def _divisor_gens(n: int) -> list[int]:
    """F2 generators of the group of squarefree divisor classes of n."""
    return [-1] + prime_divisors(n)


def _condition_places(d: int, disc: int) -> list[Place]:
    ps = {p for p in prime_divisors(d * disc) if p % 2}
    return [INFINITY, Place(2)] + [Place(p) for p in sorted(ps)]


def _hilbert_condition_rows(gens: list[int], target: int, places) -> list[int]:
    """Row v of the output has bit j set iff (gens[j], target)_v = -1."""
    rows = []
    for v in places:
        acc = 0
        for j, g in enumerate(gens):
            if hilbert(g, target, v) == -1:
                acc |= 1 << j
        rows.append(acc)
    return rows


def _kernel_values(gens: list[int], rows: list[int]) -> list[int]:
    vals = []
    for mask in gf2.kernel_basis(rows, len(gens)):
        prod = 1
        for j, g in enumerate(gens):
            if (mask >> j) & 1:
                prod *= g
        vals.append(square_class(prod))
    return vals


def v_spaces(d: int, p0: int) -> tuple[list[int], list[int]]:
    """(V_Tor basis, V_Quo basis): divisor classes b of d with
    (b, disc)_v = +1 everywhere, resp. a with (a, -disc)_v = +1 everywhere,
    for disc = d * p0."""
    disc = d * p0
    if not is_fundamental(disc):
        raise NotFundamental(f"{d} * {p0} is not fundamental")
    gens = _divisor_gens(d)
    places = _condition_places(d, disc)
    tor = _kernel_values(gens, _hilbert_condition_rows(gens, disc, places))
    quo = _kernel_values(gens, _hilbert_condition_rows(gens, -disc, places))
    return tor, quo


def is_generic(d: int, p0: int) -> bool:
    """No nonsquare a | d has (a, disc)_v = (a, -disc)_v = +1 everywhere."""
    disc = d * p0
    if not is_fundamental(disc):
        raise NotFundamental(f"{d} * {p0} is not fundamental")
    gens = _divisor_gens(d)
    places = _condition_places(d, disc)
    rows = _hilbert_condition_rows(gens, disc, places)
    rows += _hilbert_condition_rows(gens, -disc, places)
    return not gf2.kernel_basis(rows, len(gens))


# ---------------------------------------------------------------------------
# pairing matrices


def _class_rep_prime(D: int, b: int) -> int:
    """A rational prime q = 1 mod 8, coprime to 2D, whose degree-one prime
    ideal lies in the class of the norm-|b| ramified ideal of disc D.

    The reduced form of that ideal class represents such primes; the class
    is 2-torsion, so the inverse-class ambiguity of "f represents q" is
    harmless, and the principal-genus membership of the class makes every
    divisor of D a square mod q.
    """
    f = form_for_divisor(D, b).reduced()
    for height in range(1, 64):
        for u in range(-height, height + 1):
            for v in (-height, height):
                q = f(u, v)
                if q % 8 == 1 and q > 2 and (2 * D) % q and is_prime(q):
                    return q
        for v in range(-height + 1, height):
            for u in (-height, height):
                q = f(u, v)
                if q % 8 == 1 and q > 2 and (2 * D) % q and is_prime(q):
                    return q
    raise ArithmeticError(f"no representative prime found for b = {b}")  # pragma: no cover


def _pairing_rows(disc: int, quo: list[int], tor: list[int]) -> list[int]:
    """Rows indexed by the character side (a), columns by the ideal side (b)."""
    rep_primes = [_class_rep_prime(disc, b) for b in tor]
    rows = []
    for a in quo:
        field = build_redei_field(a, square_class(disc // a))
        acc = 0
        for j, q in enumerate(rep_primes):
            if int(artin_symbol(field, q)):
                acc |= 1 << j
        rows.append(acc)
    return rows


def pairing_matrix_disc(D: int) -> tuple[list[int], list[int], list[int]]:
    """The Redei-symbol pairing of a single fundamental discriminant D:
    returns (quo basis, tor basis, rows).  Matrix corank = 8-rank of D."""
    if not is_fundamental(D) or D > 0:
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")
    gens = _divisor_gens(D)
    places = _condition_places(1, D)
    tor = _kernel_values(gens, _hilbert_condition_rows(gens, D, places))
    quo = _kernel_values(gens, _hilbert_condition_rows(gens, -D, places))
    return quo, tor, _pairing_rows(D, quo, tor)


def pairing_matrix(d: int, p: int) -> list[int]:
    """The pairing matrix of disc = d*p on the divisor spaces of d."""
    tor, quo = v_spaces(d, p)
    return _pairing_rows(d * p, quo, tor)


# ---------------------------------------------------------------------------
# transport


@dataclass(frozen=True)
class GoverningContext:
    d: int
    p0: int
    disc0: int
    basis_tor: tuple[int, ...]
    basis_quo: tuple[int, ...]
    m: int
    base_rows: tuple[int, ...]
    fields: dict  # (i, j) -> RedeiField for L_{a_i, b_j}
    generic: bool

    def __repr__(self) -> str:
        return (
            f"GoverningContext(d={self.d}, p0={self.p0}, m={self.m}, "
            f"generic={self.generic})"
        )


def build_context(d: int, p0: int, check_oracle: bool = True) -> GoverningContext:
    """Anchor everything at p0: V-spaces, base pairing matrix, and the
    governing fields L_{a_i, b_j} used for per-prime corrections."""
    disc0 = d * p0
    tor, quo = v_spaces(d, p0)
    m = len(tor)
    if len(quo) != m:
        raise ArithmeticError(f"V-space dimensions differ for ({d}, {p0})")
    generic = is_generic(d, p0)
    base = _pairing_rows(disc0, quo, tor) if m else []
    if check_oracle:
        rm = redei_matrix_4rank(disc0)
        if rm.corank != m:
            raise ArithmeticError(f"four-rank mismatch at ({d}, {p0})")
        if m and (m - gf2.rank(base)) != eight_rank_oracle(disc0):
            raise ArithmeticError(f"anchor pairing disagrees with oracle at ({d}, {p0})")
    fields = {}
    if generic:
        for i, a in enumerate(quo):
            for j, b in enumerate(tor):
                fields[(i, j)] = build_redei_field(a, b)
    return GoverningContext(d, p0, disc0, tuple(tor), tuple(quo), m, tuple(base), fields, generic)


def in_family(d: int, p0: int, p: int) -> bool:
    """Is p an admissible transport prime: p prime, coprime to 2*d*p0 or
    equal to p0, with p*p0 a square mod 8d?"""
    if not is_prime(p):
        return False
    if p == p0:
        return True
    n = p * p0
    if (2 * d) % p == 0 or n % 8 != 1:
        return False
    return all(kronecker(n, q) == 1 for q in prime_divisors(d) if q % 2)


def prime_family_for(d: int, p0: int, N: int) -> list[int]:
    """Y_{N,d,p0}: admissible primes below N, ascending."""
    return [p for p in primes_upto(N - 1) if in_family(d, p0, p)]


def transport_matrix(ctx: GoverningContext, p: int) -> list[int]:
    """Base matrix plus the Artin correction at the squarefree part of
    p * p0.  Cost per prime: O(m^2) Legendre evaluations."""
    if not ctx.generic:
        raise NonGeneric(f"({ctx.d}, {ctx.p0}) is not generic")
    if not in_family(ctx.d, ctx.p0, p):
        raise HypothesisViolation(f"{p} * {ctx.p0} is not a square mod 8d")
    if p == ctx.p0:
        return list(ctx.base_rows)
    c = p * ctx.p0
    rows = list(ctx.base_rows)
    for i in range(ctx.m):
        acc = 0
        for j in range(ctx.m):
            if int(artin_symbol(ctx.fields[(i, j)], c)):
                acc |= 1 << j
        rows[i] ^= acc
    return rows


def correction_matrix(ctx: GoverningContext, p: int) -> list[int]:
    base = list(ctx.base_rows)
    return [r ^ b for r, b in zip(transport_matrix(ctx, p), base)]


def predict_8rank(ctx: GoverningContext, p: int) -> int:
    """Corank of the transported matrix = predicted 8-rank of Cl(d*p)."""
    return ctx.m - gf2.rank(transport_matrix(ctx, p))
