"""Hermitian forms over Z[tau_d] and their unitary automorphism groups.

A positive definite hermitian matrix of determinant 1 is the matrix of a
principal polarization on the cube of a CM elliptic curve; the catalog of
such forms lives in `catalog`.  Automorphism counting enumerates short
vectors of the rank-2g trace lattice (Fincke-Pohst) and assembles unitary
matrices column by column.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .quadorder import QuadInt, check_discriminant, tau_constant


class EnumerationCapError(RuntimeError):
    """Short-vector enumeration exceeded the configured cap."""


@dataclass(frozen=True)
class HermitianForm:
    d: int
    entries: tuple  # g x g tuple-of-tuples of QuadInt
    label: str = "custom"

    def __post_init__(self):
        check_discriminant(self.d)
        g = len(self.entries)
        for row in self.entries:
            if len(row) != g:
                raise ValueError("entries must be square")
        for i in range(g):
            for j in range(g):
                e = self.entries[i][j]
                if not isinstance(e, QuadInt) or e.d != self.d:
                    raise ValueError("entries must be QuadInt over the form's order")
                c = self.entries[j][i].conjugate()
                if (e.a, e.b) != (c.a, c.b):
                    raise ValueError(f"not hermitian at ({i},{j})")

    @property
    def g(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> QuadInt:
        i, j = ij
        return self.entries[i][j]

    def conjugate(self) -> "HermitianForm":
        g = self.g
        ent = tuple(
            tuple(self.entries[i][j].conjugate() for j in range(g)) for i in range(g)
        )
        lbl = self.label + "~" if self.label != "custom" else "custom"
        return HermitianForm(self.d, ent, lbl)

    def ab_parts(self) -> tuple[list[list[int]], list[list[int]]]:
        """Integer matrices (A, B) with M = A + B*tau."""
        g = self.g
        A = [[self.entries[i][j].a for j in range(g)] for i in range(g)]
        B = [[self.entries[i][j].b for j in range(g)] for i in range(g)]
        return A, B


def form_from_ab(d: int, pairs, label: str = "custom") -> HermitianForm:
    """Build a form from a g x g nest of (a, b) integer pairs."""
    ent = tuple(tuple(QuadInt(a, b, d) for (a, b) in row) for row in pairs)
    return HermitianForm(d, ent, label)


def hermitian_det(m: HermitianForm) -> QuadInt:
    """Exact determinant over the order, by cofactor expansion."""

    def det(rows: list[list[QuadInt]]) -> QuadInt:
        n = len(rows)
        if n == 1:
            return rows[0][0]
        acc = QuadInt(0, 0, m.d)
        sign = 1
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            term = rows[0][j] * det(minor)
            acc = acc + term if sign > 0 else acc - term
            sign = -sign
        return acc

    return det([list(r) for r in m.entries])


def _leading_minors(m: HermitianForm) -> list[int]:
    out = []
    for k in range(1, m.g + 1):
        sub = HermitianForm(
            m.d, tuple(tuple(m.entries[i][j] for j in range(k)) for i in range(k))
        )
        v = hermitian_det(sub)
        if not v.is_rational:
            raise ArithmeticError("leading minor of a hermitian matrix must be rational")
        out.append(v.a)
    return out


def is_positive_definite(m: HermitianForm) -> bool:
    return all(v > 0 for v in _leading_minors(m))


def gram_realization(m: HermitianForm) -> list[list[int]]:
    """Gram matrix of the rank-2g trace lattice.

    Basis of Z[tau]^g over Z: e_1, tau e_1, ..., e_g, tau e_g; pairing
    Tr(conj(x)^t M y).  Symmetric, integral, even diagonal; positive
    definite iff M is.
    """
    g = m.g
    basis = []
    for i in range(g):
        for t in (QuadInt(1, 0, m.d), QuadInt(0, 1, m.d)):
            vec = [QuadInt(0, 0, m.d)] * g
            vec[i] = t
            basis.append(tuple(vec))
    n = 2 * g
    gram = [[0] * n for _ in range(n)]
    for r in range(n):
        for s in range(r, n):
            val = _herm_pair(m, basis[r], basis[s])
            gram[r][s] = gram[s][r] = val.trace()
    return gram


def _herm_pair(m: HermitianForm, x, y) -> QuadInt:
    """conj(x)^t M y over the order."""
    g = m.g
    acc = QuadInt(0, 0, m.d)
    for i in range(g):
        xi = x[i].conjugate()
        for j in range(g):
            acc = acc + xi * m.entries[i][j] * y[j]
    return acc


def short_vectors(gram: list[list[int]], bound: int, cap: int = 100_000):
    """All nonzero x in Z^n with x^t G x <= bound, up to sign (one of +-x).

    Fincke-Pohst over a float Cholesky factorization with an exact final
    check, so float rounding can only admit candidates, never drop them.
    """
    n = len(gram)
    # float Cholesky of G = R^t R with safety slack
    r = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            s = float(gram[i][j]) - sum(r[k][i] * r[k][j] for k in range(i))
            if i == j:
                if s <= 0:
                    raise ArithmeticError("gram matrix not positive definite")
                r[i][i] = math.sqrt(s)
            else:
                r[i][j] = s / r[i][i]

    slack = 0.5 + 1e-9 * bound
    out = []
    x = [0] * n

    def exact_q(v) -> int:
        return sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))

    def rec(i: int, rem: float, center_terms: list[float]):
        if len(out) > cap:
            raise EnumerationCapError(f"more than {cap} short vectors")
        if i < 0:
            if any(x) and exact_q(x) <= bound:
                out.append(tuple(x))
            return
        # x_i ranges so that (r_ii x_i + c_i)^2 <= rem
        c = center_terms[i]
        half = math.sqrt(max(rem, 0.0)) + slack
        lo = math.ceil((-half - c) / r[i][i] - 1e-9)
        hi = math.floor((half - c) / r[i][i] + 1e-9)
        for xi in range(lo, hi + 1):
            x[i] = xi
            t = r[i][i] * xi + c
            new_terms = center_terms[:]
            for k in range(i):
                new_terms[k] += r[k][i] * xi if False else 0.0
            # update centers for the next level
            nt = center_terms[:]
            for k in range(i):
                nt[k] = nt[k] + r[k][i] * xi
            rec(i - 1, rem - t * t + 2 * slack * abs(t) + slack, nt)
        x[i] = 0

    # canonical sign: first nonzero coordinate (from the top index) positive
    rec(n - 1, float(bound), [0.0] * n)
    seen = set()
    uniq = []
    for v in out:
        neg = tuple(-c for c in v)
        key = max(v, neg)
        if key not in seen:
            seen.add(key)
            uniq.append(key)
    return uniq


def _vec_to_quad(x, d: int, g: int):
    return tuple(QuadInt(x[2 * i], x[2 * i + 1], d) for i in range(g))


def automorphism_order(m: HermitianForm, cap: int = 100_000) -> int:
    """Order of {Q in GL_g(Z[tau]) : conj(Q)^t M Q = M}.

    Columns of Q are vectors with the same hermitian norms and pairings as
    the standard basis; candidates come from short-vector enumeration on
    the trace lattice.  Always even (-I is unitary).
    """
    if not is_positive_definite(m):
        raise ValueError("automorphism enumeration needs a positive definite form")
    g = m.g
    maxdiag = max(m.entries[j][j].a for j in range(g))
    gram = gram_realization(m)
    half = short_vectors(gram, 2 * maxdiag, cap)
    vecs = []
    for x in half:
        v = _vec_to_quad(x, m.d, g)
        vecs.append(v)
        vecs.append(tuple(-q for q in v))
    by_norm: dict[int, list] = {}
    for v in vecs:
        nrm = _herm_pair(m, v, v)
        by_norm.setdefault(nrm.a, []).append(v)

    count = 0

    def place(j: int, cols: list):
        nonlocal count
        if j == g:
            count += 1
            return
        want = m.entries[j][j].a
        for v in by_norm.get(want, ()):
            ok = True
            for i in range(j):
                pij = _herm_pair(m, cols[i], v)
                tgt = m.entries[i][j]
                if (pij.a, pij.b) != (tgt.a, tgt.b):
                    ok = False
                    break
            if ok:
                cols.append(v)
                place(j + 1, cols)
                cols.pop()

    place(0, [])
    return count
