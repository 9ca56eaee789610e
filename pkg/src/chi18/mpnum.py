"""Arbitrary-precision numeric kernel.

Thin contract layer over mpmath: a precision context that is passed
explicitly (never global mutable state), plus the few complex-matrix
operations the analytic pipeline needs, with residual checks on every
inversion.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf


class PrecisionError(ArithmeticError):
    """Requested accuracy cannot be certified."""


class MatrixConditionError(PrecisionError):
    """Matrix inversion rejected: singular or too ill-conditioned."""


@dataclass(frozen=True)
class PrecisionContext:
    """Target decimal digits plus guard digits carried by all operations."""

    digits: int = 50
    guard: int = 15

    def __post_init__(self):
        if self.digits < 20:
            raise ValueError("digits must be >= 20")
        if self.guard < 1:
            raise ValueError("guard must be positive")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.digits, self.guard)

    def eps(self, slack: int = 0) -> mpf:
        """10^-(digits - slack), inside a working block."""
        return mpf(10) ** (-(self.digits - slack))


@contextmanager
def working(ctx: PrecisionContext, extra_dps: int = 0):
    """All mpmath arithmetic inside runs at ctx.dps (+extra) digits."""
    with mp.workdps(ctx.dps + extra_dps):
        yield


def const_pi(ctx: PrecisionContext) -> mpf:
    with working(ctx):
        return +mp.pi


def sqrt_principal(z, ctx: PrecisionContext) -> mpc:
    """Principal square root: cut on the negative real axis, Im >= 0 there."""
    with working(ctx):
        if z == 0:
            raise PrecisionError("sqrt of zero has no certified relative accuracy")
        return mpmath.sqrt(mpc(z))


def exp_c(z, ctx: PrecisionContext) -> mpc:
    with working(ctx):
        return mpmath.exp(mpc(z))


def log_c(z, ctx: PrecisionContext) -> mpc:
    with working(ctx):
        if z == 0:
            raise PrecisionError("log of zero")
        return mpmath.log(mpc(z))


def powi(z, n: int, ctx: PrecisionContext) -> mpc:
    with working(ctx):
        return mpc(z) ** int(n)


def mat_mul(a: mpmath.matrix, b: mpmath.matrix) -> mpmath.matrix:
    return a * b


def mat_det(a: mpmath.matrix, ctx: PrecisionContext) -> mpc:
    if a.rows != a.cols:
        raise ValueError("determinant needs a square matrix")
    with working(ctx):
        return mp.det(a)


def mat_inv(a: mpmath.matrix, ctx: PrecisionContext) -> mpmath.matrix:
    """Inverse with a hard residual check ||A A^-1 - I||_inf < 10^-digits."""
    if a.rows != a.cols:
        raise ValueError("inverse needs a square matrix")
    n = a.rows
    with working(ctx, extra_dps=ctx.guard):
        try:
            inv = a ** -1
        except ZeroDivisionError as exc:
            raise MatrixConditionError("singular matrix") from exc
        resid = mp.norm(a * inv - mp.eye(n), mpf("inf"))
        if not resid < ctx.eps():
            raise MatrixConditionError(
                f"inverse residual {mpmath.nstr(resid, 5)} exceeds 10^-{ctx.digits}"
            )
        # cheap condition estimate; guard/2 decimal digits of headroom required
        cond = mp.norm(a, mpf("inf")) * mp.norm(inv, mpf("inf"))
        if cond > mpf(10) ** (ctx.dps - ctx.guard // 2):
            raise MatrixConditionError("matrix too ill-conditioned for context")
        return inv


def min_eig_sym(a: mpmath.matrix, ctx: PrecisionContext) -> mpf:
    """Smallest eigenvalue of a real symmetric matrix.

    mpmath's symmetric eigensolver, with a Gershgorin fallback if it fails.
    """
    n = a.rows
    with working(ctx):
        s = (a + a.T) / 2
        try:
            ev = mp.eigsy(s, eigvals_only=True)
            return min(ev)
        except Exception:
            bounds = []
            for i in range(n):
                off = sum(abs(s[i, j]) for j in range(n) if j != i)
                bounds.append(s[i, i] - off)
            return min(bounds)
