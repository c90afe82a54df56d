"""Generalized seed mutation: the algebraic oracle the geometry is tested against.

A seed couples an extended exchange matrix (square block, frozen boundary
rows, then coefficient rows starting as the identity) with cluster variables
written as Laurent polynomials in the initial variables, tropical
y-monomials read off the coefficient rows, and one monic palindromic
exchange polynomial per slot: 1 + u at standard arcs, 1 + l_p u + u^2 at a
pending arc of order p.

Mutation in direction k multiplies out

    x_k' * x_k = (prod_j x_j^{[-b_jk]+})^{d_k} * sum_s z_{k,s} yhat_k^s
                 / (tropical sum_s z_{k,s} y_k^s)

with everything expressed over the initial seed; the division by x_k is a
genuine polynomial division and failing to divide exactly is a hard error.
"""

from __future__ import annotations

import numpy as np

from orbcluster.chebring import MultiChebScalar
from orbcluster.laurent import LaurentPoly, VarTable
from orbcluster.orbifold import FlipError, Triangulation

__all__ = [
    "ExchangePoly",
    "TropMonomial",
    "Seed",
    "MutationError",
    "exact_divide",
    "mutate",
    "mutate_matrix",
    "cluster_variable_by_path",
]


class MutationError(ArithmeticError):
    """Mutation arithmetic failed; indicates a bug, not bad user input."""


class ExchangePoly:
    """Monic palindromic exchange polynomial z(u) = sum_s z_s u^s."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(MultiChebScalar._coerce(c) for c in coeffs)
        if len(coeffs) < 2:
            raise ValueError("exchange polynomials have degree at least one")
        if not (coeffs[0].is_one() and coeffs[-1].is_one()):
            raise ValueError("exchange polynomial must be monic with constant term 1")
        for s, c in enumerate(coeffs):
            if c != coeffs[len(coeffs) - 1 - s]:
                raise ValueError("exchange polynomial must be palindromic")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("ExchangePoly is immutable")

    @classmethod
    def binomial(cls):
        return cls((1, 1))

    @classmethod
    def trinomial(cls, p):
        return cls((MultiChebScalar.one(), MultiChebScalar.lam(p),
                    MultiChebScalar.one()))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, s):
        return self.coeffs[s]

    def __eq__(self, other):
        return isinstance(other, ExchangePoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "ExchangePoly(" + ", ".join(c.render() for c in self.coeffs) + ")"


class TropMonomial:
    """Monomial in the tropical semifield on the initial y-variables.

    Multiplication adds exponent vectors; the tropical sum takes the
    componentwise minimum.
    """

    __slots__ = ("labels", "exps")

    def __init__(self, labels, exps):
        labels = tuple(labels)
        exps = tuple(int(e) for e in exps)
        if len(labels) != len(exps):
            raise ValueError("one exponent per label")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "exps", exps)

    def __setattr__(self, *a):
        raise AttributeError("TropMonomial is immutable")

    @classmethod
    def one(cls, labels):
        return cls(labels, (0,) * len(tuple(labels)))

    @classmethod
    def generator(cls, labels, label):
        labels = tuple(labels)
        return cls(labels, tuple(1 if l == label else 0 for l in labels))

    def _check(self, other):
        if self.labels != other.labels:
            raise ValueError("tropical operands use different y-variables")

    def __mul__(self, other):
        self._check(other)
        return TropMonomial(self.labels,
                            tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, n):
        return TropMonomial(self.labels, tuple(int(n) * e for e in self.exps))

    def inverse(self):
        return self ** -1

    def tropical_add(self, other):
        self._check(other)
        return TropMonomial(self.labels,
                            tuple(min(a, b) for a, b in zip(self.exps, other.exps)))

    def is_one(self):
        return all(e == 0 for e in self.exps)

    def as_laurent(self, table: VarTable) -> LaurentPoly:
        return table.monomial(1, y={l: e for l, e in zip(self.labels, self.exps) if e})

    def __eq__(self, other):
        return (isinstance(other, TropMonomial)
                and self.labels == other.labels and self.exps == other.exps)

    def __hash__(self):
        return hash((self.labels, self.exps))

    def __repr__(self):
        parts = [f"y_{l}^{e}" for l, e in zip(self.labels, self.exps) if e]
        return "*".join(parts) if parts else "1"


def tropical_exchange_denominator(y: TropMonomial, degree: int) -> TropMonomial:
    """Tropical sum of 1, y, ..., y^degree (scalars are tropically trivial)."""
    out = TropMonomial.one(y.labels)
    acc = TropMonomial.one(y.labels)
    for _ in range(degree):
        acc = acc * y
        out = out.tropical_add(acc)
    return out


def mutate_matrix(M, k, degrees):
    """Extended matrix mutation in direction k with exchange degrees."""
    old = np.asarray(M, dtype=int)
    new = old.copy()
    d_k = int(degrees[k])
    rows, cols = old.shape
    for i in range(rows):
        for j in range(cols):
            if i == k or j == k:
                new[i, j] = -old[i, j]
            else:
                new[i, j] = old[i, j] + d_k * (
                    max(-old[i, k], 0) * old[k, j]
                    + old[i, k] * max(old[k, j], 0))
    return new


def exact_divide(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact Laurent division num/den; MutationError if the division fails.

    Works from the least term under (total y-degree, lex) upward.  Cluster
    variables are monic there (the coefficient-free monomial has scalar 1),
    which keeps the scalar divisions trivial in practice.
    """
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return num.table.zero()
    if den.is_monomial():
        return num.divide_by_monomial(den)
    table = num.table
    nv = table.nx

    def okey(e):
        return (sum(e[nv:]), e)

    dlead = min(den.terms, key=okey)
    dcoef = den.terms[dlead]
    width = table.width
    # any exact quotient lives in this exponent box (Minkowski support bound)
    lo = [min(e[i] for e in num.terms) - max(e[i] for e in den.terms)
          for i in range(width)]
    hi = [max(e[i] for e in num.terms) - min(e[i] for e in den.terms)
          for i in range(width)]
    rem = dict(num.terms)
    quo = {}
    while rem:
        rlead = min(rem, key=okey)
        q = tuple(a - b for a, b in zip(rlead, dlead))
        if any(e < l or e > h for e, l, h in zip(q, lo, hi)):
            raise MutationError("inexact division: quotient support escaped")
        try:
            qc = rem[rlead] / dcoef
        except ZeroDivisionError as exc:
            raise MutationError(f"inexact division: {exc}") from exc
        quo[q] = qc
        for de, dc in den.terms.items():
            key = tuple(a + b for a, b in zip(q, de))
            c = rem.get(key, MultiChebScalar.zero()) - qc * dc
            if c.is_zero():
                rem.pop(key, None)
            else:
                rem[key] = c
    return LaurentPoly(table, quo)


class Seed:
    """Immutable generalized seed with principal coefficients.

    The extended matrix stacks three blocks over the interior columns: the
    square exchange block, one frozen row per boundary segment (in table
    order), and the coefficient rows, which start as the identity.
    """

    __slots__ = ("table", "labels", "blabels", "ext", "x_vars", "zpolys", "shadow")

    def __init__(self, table, labels, ext, x_vars, zpolys, shadow=None):
        labels = tuple(labels)
        blabels = tuple(a for a in table.labels if a in table.boundary)
        ext = np.asarray(ext, dtype=int)
        n = len(labels)
        if ext.shape != (2 * n + len(blabels), n):
            raise ValueError("extended matrix must stack boundary and "
                             "coefficient rows under a square exchange block")
        if not np.array_equal(ext[:n], -ext[:n].T):
            raise ValueError("exchange block must be skew-symmetric")
        x_vars = tuple(x_vars)
        zpolys = tuple(zpolys)
        if len(x_vars) != n or len(zpolys) != n:
            raise ValueError("need one cluster variable and one exchange "
                             "polynomial per slot")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "blabels", blabels)
        object.__setattr__(self, "ext", ext)
        object.__setattr__(self, "x_vars", x_vars)
        object.__setattr__(self, "zpolys", zpolys)
        object.__setattr__(self, "shadow", shadow)
        self.ext.setflags(write=False)

    def __setattr__(self, *a):
        raise AttributeError("Seed is immutable")

    # ------------------------------------------------------------------

    @classmethod
    def from_triangulation(cls, tri: Triangulation) -> "Seed":
        tri.require_valid()
        table = tri.var_table()
        labels = tri.interior_labels()
        zp = []
        for lab in labels:
            arc = tri.arcs[lab]
            if arc.kind == "pending":
                zp.append(ExchangePoly.trinomial(arc.order))
            else:
                zp.append(ExchangePoly.binomial())
        xs = tuple(table.x(lab) for lab in labels)
        return cls(table, labels, tri.extended_exchange_matrix(), xs, zp, shadow=tri)

    @classmethod
    def from_matrix(cls, B, zpolys, labels=None) -> "Seed":
        """Raw seed without a triangulation behind it."""
        B = np.asarray(B, dtype=int)
        n = B.shape[0]
        if labels is None:
            labels = tuple(f"v{i + 1}" for i in range(n))
        table = VarTable(labels)
        ext = np.vstack([B, np.eye(n, dtype=int)])
        xs = tuple(table.x(lab) for lab in labels)
        return cls(table, labels, ext, xs, tuple(zpolys))

    # ------------------------------------------------------------------

    @property
    def n(self):
        return len(self.labels)

    @property
    def m(self):
        return len(self.blabels)

    @property
    def b_matrix(self):
        return self.ext[: self.n]

    @property
    def boundary_rows(self):
        return self.ext[self.n: self.n + self.m]

    @property
    def c_matrix(self):
        return self.ext[self.n + self.m:]

    def degree_vector(self):
        return tuple(z.degree for z in self.zpolys)

    def slot(self, k) -> int:
        """Resolve a slot given as an arc label or a 1-based index."""
        if isinstance(k, (int, np.integer)):
            if not 1 <= k <= self.n:
                raise ValueError(f"slot index {k} out of range 1..{self.n}")
            return int(k) - 1
        try:
            return self.labels.index(k)
        except ValueError:
            raise ValueError(f"unknown slot {k!r}") from None

    def x(self, k) -> LaurentPoly:
        return self.x_vars[self.slot(k)]

    def y(self, k) -> TropMonomial:
        return TropMonomial(self.labels, self.c_matrix[:, self.slot(k)])

    def z(self, k) -> ExchangePoly:
        return self.zpolys[self.slot(k)]

    # ------------------------------------------------------------------

    def mutate(self, k) -> "Seed":
        i = self.slot(k)
        n = self.n
        z = self.zpolys[i]
        d_k = z.degree
        top = [int(v) for v in self.ext[:n, i]]
        mid = [int(v) for v in self.ext[n: n + self.m, i]]
        bottom = [int(v) for v in self.ext[n + self.m:, i]]
        table = self.table

        num = table.zero()
        for s in range(d_k + 1):
            bx = {}
            for lab, r in zip(self.blabels, mid):
                e = (d_k - s) * max(-r, 0) + s * max(r, 0)
                if e:
                    bx[lab] = e
            term = table.monomial(
                z.coeff(s), x=bx,
                y={lab: s * c for lab, c in zip(self.labels, bottom) if s * c})
            for j in range(n):
                e = (d_k - s) * max(-top[j], 0) + s * max(top[j], 0)
                if e:
                    term = term * self.x_vars[j] ** e
            num = num + term
        newx = exact_divide(num, self.x_vars[i])
        # tropical denominator (scalar coefficients are tropically trivial)
        shift = {lab: -d_k * c for lab, c in zip(self.labels, bottom) if c < 0}
        if shift:
            newx = newx * table.monomial(1, y=shift)

        ext2 = mutate_matrix(self.ext, i, self.degree_vector())
        xs = list(self.x_vars)
        xs[i] = newx

        shadow = None
        if self.shadow is not None:
            try:
                shadow = self.shadow.flip(self.labels[i])
            except FlipError:
                shadow = None
            else:
                if not np.array_equal(shadow.exchange_matrix(), ext2[:n]):
                    raise MutationError(
                        "flip of the triangulation disagrees with matrix mutation")
                if not np.array_equal(shadow.boundary_exchange_rows(),
                                      ext2[n: n + self.m]):
                    raise MutationError(
                        "flip of the triangulation disagrees on boundary rows")
        return Seed(table, self.labels, ext2, xs, self.zpolys, shadow=shadow)

    def mutate_path(self, ks) -> "Seed":
        seed = self
        for k in ks:
            seed = seed.mutate(k)
        return seed

    # ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        return (self.table == other.table
                and self.labels == other.labels
                and np.array_equal(self.ext, other.ext)
                and all(a.terms == b.terms for a, b in zip(self.x_vars, other.x_vars))
                and self.zpolys == other.zpolys)

    def __repr__(self):
        return f"Seed({self.n} slots, labels={self.labels!r})"


def mutate(seed: Seed, k) -> Seed:
    return seed.mutate(k)


def cluster_variable_by_path(seed0, flips, slot=None) -> LaurentPoly:
    """Mutate along `flips` and return the variable made by the last flip.

    `seed0` may be a Seed or a Triangulation.  With an empty path, `slot`
    names the initial variable to return.
    """
    seed = (Seed.from_triangulation(seed0)
            if isinstance(seed0, Triangulation) else seed0)
    flips = list(flips)
    if not flips:
        if slot is None:
            raise ValueError("empty flip path needs an explicit slot")
        return seed.x(slot)
    seed = seed.mutate_path(flips)
    return seed.x(slot if slot is not None else flips[-1])
