"""Exact arithmetic in imaginary quadratic maximal orders Z[tau_d].

tau_d = (1 + sqrt(-d))/2 for square-free d = 3 (mod 4), so tau_d satisfies
tau^2 - tau + (1+d)/4 = 0.  Elements are written [a, b] = a + b*tau_d.
Also: Frobenius traces of the minimal-conductor CM curves over prime
fields and their extensions, and quadratic-residue tests in F_q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf, sqrt

from .mpnum import PrecisionContext, working

#: discriminants whose form catalog and curve models are built in
CATALOG_DISCRIMINANTS = (7, 19, 43, 67, 163)


class DiscriminantError(ValueError):
    pass


def _is_squarefree(n: int) -> bool:
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def check_discriminant(d: int, catalog: bool = False) -> int:
    """Validate d: positive, square-free, 3 mod 4 (so tau_d is integral)."""
    if d <= 0 or d % 4 != 3 or not _is_squarefree(d):
        raise DiscriminantError(f"d={d}: need positive square-free d = 3 (mod 4)")
    if catalog and d not in CATALOG_DISCRIMINANTS:
        raise DiscriminantError(f"d={d} is not a catalog discriminant {CATALOG_DISCRIMINANTS}")
    return d


def tau_constant(d: int) -> int:
    """c with tau^2 = tau - c, i.e. c = (1+d)/4."""
    return (1 + d) // 4


@dataclass(frozen=True)
class QuadInt:
    """a + b*tau_d with unbounded integer a, b."""

    a: int
    b: int
    d: int

    def _same(self, other: "QuadInt") -> None:
        if self.d != other.d:
            raise DiscriminantError(f"mixed discriminants {self.d} and {other.d}")

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._same(other)
        return QuadInt(self.a + other.a, self.b + other.b, self.d)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._same(other)
        return QuadInt(self.a - other.a, self.b - other.b, self.d)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadInt(self.a * other, self.b * other, self.d)
        self._same(other)
        c = tau_constant(self.d)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return QuadInt(a1 * a2 - c * b1 * b2, a1 * b2 + a2 * b1 + b1 * b2, self.d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QuadInt":
        if n < 0:
            raise ValueError("negative powers leave the order")
        result = QuadInt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QuadInt":
        return QuadInt(self.a + self.b, -self.b, self.d)

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b + tau_constant(self.d) * self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + self.b

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def embed(self, ctx: PrecisionContext) -> mpc:
        """Complex value under tau_d -> (1 + i*sqrt(d))/2 (Im > 0 convention)."""
        with working(ctx):
            return self.a + self.b * (1 + mpc(0, 1) * sqrt(self.d)) / 2

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"[{self.a},{self.b}]"


def quad_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


class ZeroResidueError(ArithmeticError):
    """x = 0 (mod p): squareness in F_q is undetermined, not a boolean."""


def is_square_in_fq(x: int, p: int, n: int = 1) -> bool:
    """Whether x (an integer, taken mod p) is a square in F_{p^n}.

    Euler criterion x^((p^n-1)/2); for x in the prime field this reduces to
    the Legendre symbol when n is odd and is always true when n is even.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    if n < 1:
        raise ValueError("n must be positive")
    if x % p == 0:
        raise ZeroResidueError(f"{x} = 0 mod {p}")
    return pow(x % p, (p**n - 1) // 2, p) == 1


@dataclass(frozen=True)
class TraceResult:
    t: int
    q: int
    ordinary: bool

    def __post_init__(self):
        if self.t * self.t > 4 * self.q:
            raise ValueError("trace violates the Weil bound")


def trace_over_p(d: int, p: int) -> TraceResult:
    """Frobenius trace of the minimal-conductor CM curve E(d) over F_p.

    0 in the supersingular case (p/d) = -1; otherwise the unique a_p with
    4p = a_p^2 + d b_p^2 and (2 a_p / d) = 1, found by direct enumeration
    of a_p up to the Weil bound.
    """
    check_discriminant(d, catalog=True)
    if p == d:
        raise ValueError(f"p = {p} = d: bad reduction")
    if p != 2 and legendre(p, d) == -1:
        return TraceResult(0, p, ordinary=False)
    bound = math.isqrt(4 * p)
    for ap in range(-bound, bound + 1):
        rest = 4 * p - ap * ap
        if rest <= 0 or rest % d != 0:
            continue
        bsq = rest // d
        b = math.isqrt(bsq)
        if b * b != bsq:
            continue
        if legendre(2 * ap, d) == 1:
            return TraceResult(ap, p, ordinary=ap % p != 0)
    raise ArithmeticError(f"no representation 4p = a^2 + {d} b^2 found for p={p}")


def trace_over_q(d: int, p: int, n: int) -> TraceResult:
    """Frobenius trace over F_{p^n} by the Weil recursion t_k = t_1 t_{k-1} - p t_{k-2}."""
    if n < 1:
        raise ValueError("n must be positive")
    t1 = trace_over_p(d, p).t
    tprev, t = 2, t1
    for _ in range(n - 1):
        tprev, t = t, t1 * t - p * tprev
    return TraceResult(t, p**n, ordinary=t % p != 0)


def quadratic_roots_mod_p(d: int, p: int) -> tuple[int, ...]:
    """Roots of X^2 - X + (1+d)/4 in F_p; the two degree-one primes above p."""
    check_discriminant(d)
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    c = tau_constant(d)
    return tuple(sorted(r for r in range(p) if (r * r - r + c) % p == 0))


def reduce_quadint_mod_p(x: QuadInt, p: int, root_choice: int) -> int:
    """Image of a + b*tau in F_p under tau -> root_choice.

    root_choice must be a root of X^2 - X + (1+d)/4 mod p.  Rational values
    (b = 0) ignore the choice; for b != 0 an inert p has no such root and the
    caller owns picking between the two conjugate reductions.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    c = tau_constant(x.d)
    r = root_choice % p
    if (r * r - r + c) % p != 0:
        if x.b == 0:
            # rational values reduce the same way under either prime
            return x.a % p
        raise ValueError(f"{root_choice} is not a root of X^2 - X + {c} mod {p}")
    return (x.a + x.b * r) % p
