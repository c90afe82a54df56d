"""Exact arithmetic in the rings generated by 2*cos(pi/p).

Values are normalized Chebyshev combinations: polynomials in the algebraic
number l_p = 2*cos(pi/p), reduced modulo its minimal polynomial m_p over Q.
m_p is irreducible, so the quotient is a number field and division by any
nonzero element is exact.  `MultiChebScalar` extends this to products over
several distinct orders p (the tensor algebra over Q), which is what
coefficients of multi-orbifold-point expansions live in.

Coefficients are `fractions.Fraction`; no floating point enters any ring
operation.  Floats appear only in `evalf`/root-selection, which exist for
cross-checking against numeric evaluation.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "OrderMismatchError",
    "check_order",
    "chebyshev_u_coeffs",
    "minimal_polynomial",
    "lambda_numeric",
    "ChebValue",
    "cheb_u",
    "MultiChebScalar",
]


class OrderMismatchError(ValueError):
    """Raised when two values over different orders p are combined directly."""


def check_order(p: int) -> int:
    """Validate an orbifold-point order.  Only p >= 3 is allowed."""
    if not isinstance(p, int) or p < 3:
        raise ValueError(f"orbifold point order must be an integer >= 3, got {p!r}")
    return p


@lru_cache(maxsize=None)
def chebyshev_u_coeffs(k: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the normalized Chebyshev polynomial U_k.

    U_{-1} = 0, U_0 = 1, U_k = x*U_{k-1} - U_{k-2}.
    """
    if k < -1:
        raise ValueError(f"U_k is defined for k >= -1, got {k}")
    if k == -1:
        return (0,)
    if k == 0:
        return (1,)
    prev = chebyshev_u_coeffs(k - 2) if k >= 2 else (0,)
    shifted = (0,) + chebyshev_u_coeffs(k - 1)
    n = max(len(shifted), len(prev))
    out = [0] * n
    for i, c in enumerate(shifted):
        out[i] += c
    for i, c in enumerate(prev):
        out[i] -= c
    return tuple(out)


def lambda_numeric(p: int) -> float:
    """The real number 2*cos(pi/p)."""
    check_order(p)
    return 2.0 * math.cos(math.pi / p)


def _poly_eval(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + float(c)
    return acc


@lru_cache(maxsize=None)
def minimal_polynomial(p: int) -> tuple[int, ...]:
    """Monic minimal polynomial of 2*cos(pi/p) over Q, ascending integer coeffs.

    Obtained by square-free factoring U_{p-1} over Z and selecting the unique
    irreducible factor that vanishes at the numeric value 2*cos(pi/p)
    (tolerance 1e-9).  2*cos(pi/p) is a root of U_{p-1} because
    U_{p-1}(2*cos t) = sin(p t)/sin(t).
    """
    check_order(p)
    import sympy

    x = sympy.Symbol("x")
    u = sympy.Poly(list(reversed(chebyshev_u_coeffs(p - 1))), x, domain="ZZ")
    lam = lambda_numeric(p)
    _, factors = u.factor_list()
    hits = []
    for fac, _mult in factors:
        coeffs = [int(c) for c in reversed(fac.all_coeffs())]
        if abs(_poly_eval(coeffs, lam)) < 1e-9:
            hits.append(coeffs)
    if len(hits) != 1:
        raise ArithmeticError(
            f"expected exactly one factor of U_{p-1} vanishing at 2cos(pi/{p}), got {len(hits)}"
        )
    coeffs = hits[0]
    # normalize to monic; the selected factor is already primitive with lead +-1
    lead = coeffs[-1]
    if lead < 0:
        coeffs = [-c for c in coeffs]
    if coeffs[-1] != 1:
        raise ArithmeticError(f"minimal polynomial factor not monic for p={p}: {coeffs}")
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _min_poly_degree(p: int) -> int:
    return len(minimal_polynomial(p)) - 1


@lru_cache(maxsize=None)
def _power_reduction(p: int, e: int) -> tuple[Fraction, ...]:
    """l_p^e reduced mod m_p, as a dense Fraction vector of length deg(m_p)."""
    d = _min_poly_degree(p)
    if e < d:
        vec = [Fraction(0)] * d
        vec[e] = Fraction(1)
        return tuple(vec)
    m = minimal_polynomial(p)
    # l^d = -(m_0 + m_1 l + ... + m_{d-1} l^{d-1})
    top = [Fraction(-c) for c in m[:d]]
    prev = _power_reduction(p, e - 1)
    # multiply prev by l
    vec = [Fraction(0)] * d
    for i in range(d - 1):
        vec[i + 1] += prev[i]
    if prev[d - 1]:
        for i in range(d):
            vec[i] += prev[d - 1] * top[i]
    return tuple(vec)


def _reduce_coeffs(p: int, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    d = _min_poly_degree(p)
    out = [Fraction(0)] * d
    for e, c in enumerate(coeffs):
        if not c:
            continue
        red = _power_reduction(p, e)
        for i in range(d):
            out[i] += c * red[i]
    return tuple(out)


class ChebValue:
    """An exact element of Q[l]/(m_p) for a single order p, power-basis storage."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=(0,)):
        check_order(order)
        object.__setattr__(self, "order", order)
        vals = [Fraction(c) for c in coeffs]
        d = _min_poly_degree(order)
        if len(vals) > d:
            vals = list(_reduce_coeffs(order, vals))
        else:
            vals += [Fraction(0)] * (d - len(vals))
        object.__setattr__(self, "coeffs", tuple(vals))

    def __setattr__(self, *a):
        raise AttributeError("ChebValue is immutable")

    @classmethod
    def from_int(cls, order: int, n) -> "ChebValue":
        return cls(order, (Fraction(n),))

    def _check(self, other: "ChebValue") -> None:
        if self.order != other.order:
            raise OrderMismatchError(
                f"cannot combine values of orders {self.order} and {other.order}"
            )

    def __add__(self, other):
        if isinstance(other, int):
            other = ChebValue.from_int(self.order, other)
        if not isinstance(other, ChebValue):
            return NotImplemented
        self._check(other)
        return ChebValue(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return ChebValue(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = ChebValue.from_int(self.order, other)
        if not isinstance(other, ChebValue):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChebValue(self.order, [a * other for a in self.coeffs])
        if not isinstance(other, ChebValue):
            return NotImplemented
        self._check(other)
        d = _min_poly_degree(self.order)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[i + j] += a * b
        return ChebValue(self.order, prod)

    __rmul__ = __mul__

    def inverse(self) -> "ChebValue":
        """Exact inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero ChebValue")
        # extended Euclid in Q[x] against m_p
        m = [Fraction(c) for c in minimal_polynomial(self.order)]
        a = list(self.coeffs)
        r0, r1 = m, _trim(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while _deg(r1) > 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if _deg(r1) < 0:
            raise ZeroDivisionError("value shares a factor with the minimal polynomial")
        c = r1[0]
        inv = [s / c for s in s1]
        return ChebValue(self.order, inv)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * Fraction(1, other)
        if not isinstance(other, ChebValue):
            return NotImplemented
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ChebValue.from_int(self.order, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def evalf(self) -> float:
        return _poly_eval(self.coeffs, lambda_numeric(self.order))

    def __eq__(self, other):
        if isinstance(other, int):
            other = ChebValue.from_int(self.order, other)
        if not isinstance(other, ChebValue):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"ChebValue(p={self.order}, {_render_univariate(self.order, self.coeffs)})"


def _trim(c: list[Fraction]) -> list[Fraction]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _deg(c: list[Fraction]) -> int:
    c = _trim(c)
    if len(c) == 1 and c[0] == 0:
        return -1
    return len(c) - 1


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if _deg(b) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    r = list(a)
    while _deg(r) >= _deg(b):
        shift = _deg(r) - _deg(b)
        factor = r[_deg(r)] / b[_deg(b)]
        q[shift] += factor
        for i, c in enumerate(b):
            r[i + shift] -= factor * c
        r = _trim(r)
        if _deg(r) < 0:
            break
    return _trim(q), _trim(r)


@lru_cache(maxsize=None)
def cheb_u(k: int, p: int) -> ChebValue:
    """U_k evaluated at l_p = 2*cos(pi/p), as an exact ChebValue.

    Defined for k >= -1; U_{-1} = 0 and U_{p-1} reduces to 0.
    """
    check_order(p)
    if k < -1:
        raise ValueError(f"U_k needs k >= -1, got {k}")
    return ChebValue(p, chebyshev_u_coeffs(k))


def _render_univariate(p: int, coeffs) -> str:
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if not c:
            continue
        parts.append((c, e))
    if not parts:
        return "0"
    out = ""
    for c, e in parts:
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            body = f"l{p}^{e}" if mag == 1 else f"{mag}*l{p}^{e}"
        if not out:
            out = body if c > 0 else "-" + body
        else:
            out += ("+" if c > 0 else "-") + body
    return out


class MultiChebScalar:
    """A sum of rational multiples of monomials in several l_p generators.

    Storage: `orders` is the sorted tuple of distinct orders present, `terms`
    maps per-order exponent tuples (each entry < deg m_p) to Fraction
    coefficients.  The empty product is the constant 1.  Factors over distinct
    orders commute freely; combining scalars aligns their order tuples.
    """

    __slots__ = ("orders", "terms")

    def __init__(self, orders=(), terms=None):
        orders = tuple(sorted(set(orders)))
        for p in orders:
            check_order(p)
        object.__setattr__(self, "orders", orders)
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = Fraction(c)
                if not c:
                    continue
                exps = tuple(exps)
                if len(exps) != len(orders):
                    raise ValueError("exponent tuple does not match order tuple")
                clean[exps] = clean.get(exps, Fraction(0)) + c
        clean = {e: c for e, c in clean.items() if c}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("MultiChebScalar is immutable")

    # ---- constructors -------------------------------------------------

    @classmethod
    def one(cls) -> "MultiChebScalar":
        return cls((), {(): Fraction(1)})

    @classmethod
    def zero(cls) -> "MultiChebScalar":
        return cls((), {})

    @classmethod
    def from_rational(cls, q) -> "MultiChebScalar":
        return cls((), {(): Fraction(q)}) if Fraction(q) else cls.zero()

    @classmethod
    def from_cheb(cls, v: ChebValue) -> "MultiChebScalar":
        terms = {}
        for e, c in enumerate(v.coeffs):
            if c:
                terms[(e,)] = c
        return cls((v.order,), terms)

    @classmethod
    def u(cls, k: int, p: int) -> "MultiChebScalar":
        return cls.from_cheb(cheb_u(k, p))

    @classmethod
    def lam(cls, p: int) -> "MultiChebScalar":
        return cls.u(1, p)

    # ---- alignment ----------------------------------------------------

    def _aligned(self, orders: tuple[int, ...]) -> "MultiChebScalar":
        if orders == self.orders:
            return self
        pos = {p: i for i, p in enumerate(orders)}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(orders)
            for p, e in zip(self.orders, exps):
                new[pos[p]] = e
            terms[tuple(new)] = c
        return MultiChebScalar(orders, terms)

    @staticmethod
    def _merge_orders(a: "MultiChebScalar", b: "MultiChebScalar"):
        orders = tuple(sorted(set(a.orders) | set(b.orders)))
        return a._aligned(orders), b._aligned(orders), orders

    @staticmethod
    def _coerce(x) -> "MultiChebScalar":
        if isinstance(x, MultiChebScalar):
            return x
        if isinstance(x, ChebValue):
            return MultiChebScalar.from_cheb(x)
        if isinstance(x, (int, Fraction)):
            return MultiChebScalar.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiChebScalar")

    # ---- ring ops ------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, orders = self._merge_orders(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiChebScalar(orders, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiChebScalar(self.orders, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, orders = self._merge_orders(self, other)
        degs = [_min_poly_degree(p) for p in orders]
        acc: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                raw = tuple(x + y for x, y in zip(e1, e2))
                for exps, c in _expand_reduced(orders, degs, raw, c1 * c2):
                    acc[exps] = acc.get(exps, Fraction(0)) + c
        return MultiChebScalar(orders, acc)

    __rmul__ = __mul__

    def inverse(self) -> "MultiChebScalar":
        """Exact inverse via a linear solve in the finite-dimensional algebra.

        Raises ZeroDivisionError if the element is not invertible (the tensor
        algebra over several orders is not a field, but every scalar that
        actually arises as a weight denominator is a product of per-order
        nonzero values and passes).
        """
        if not self.terms:
            raise ZeroDivisionError("inverse of zero scalar")
        orders = self.orders
        if not orders:
            return MultiChebScalar.from_rational(1 / next(iter(self.terms.values())))
        degs = [_min_poly_degree(p) for p in orders]
        basis = list(itertools.product(*[range(d) for d in degs]))
        index = {b: i for i, b in enumerate(basis)}
        n = len(basis)
        # columns: self * basis_j in coordinates
        mat = [[Fraction(0)] * n for _ in range(n)]
        for j, bexp in enumerate(basis):
            for e, c in self.terms.items():
                raw = tuple(x + y for x, y in zip(e, bexp))
                for exps, cc in _expand_reduced(orders, degs, raw, c):
                    mat[index[exps]][j] += cc
        rhs = [Fraction(0)] * n
        rhs[index[tuple(0 for _ in orders)]] = Fraction(1)
        sol = _solve_fraction_system(mat, rhs)
        if sol is None:
            raise ZeroDivisionError("scalar is not invertible in the tensor algebra")
        terms = {basis[i]: sol[i] for i in range(n) if sol[i]}
        return MultiChebScalar(orders, terms)

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = MultiChebScalar.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ---- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        canon = self._drop_unused()
        return canon.terms == {(): Fraction(1)} and canon.orders == ()

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def as_rational(self):
        """The value as a Fraction if no generator actually appears, else None."""
        canon = self._drop_unused()
        if canon.orders:
            return None
        if not canon.terms:
            return Fraction(0)
        return canon.terms[()]

    def _drop_unused(self) -> "MultiChebScalar":
        used = [i for i, _ in enumerate(self.orders) if any(e[i] for e in self.terms)]
        if len(used) == len(self.orders):
            return self
        orders = tuple(self.orders[i] for i in used)
        terms = {tuple(e[i] for i in used): c for e, c in self.terms.items()}
        return MultiChebScalar(orders, terms)

    def evalf(self) -> float:
        vals = [lambda_numeric(p) for p in self.orders]
        acc = 0.0
        for exps, c in self.terms.items():
            t = float(c)
            for v, e in zip(vals, exps):
                t *= v**e
            acc += t
        return acc

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a = self._drop_unused()
        b = other._drop_unused()
        return a.orders == b.orders and a.terms == b.terms

    def __hash__(self):
        canon = self._drop_unused()
        return hash((canon.orders, tuple(sorted(canon.terms.items()))))

    def render(self) -> str:
        """Deterministic text form, e.g. '(l5^1+1)' renders as 'l5^1+1'."""
        canon = self._drop_unused()
        if not canon.terms:
            return "0"
        keys = sorted(canon.terms, reverse=True)
        out = ""
        for exps in keys:
            c = canon.terms[exps]
            body_parts = []
            for p, e in zip(canon.orders, exps):
                if e:
                    body_parts.append(f"l{p}^{e}")
            mag = abs(c)
            if body_parts:
                body = "*".join(body_parts)
                if mag != 1:
                    body = f"{mag}*{body}"
            else:
                body = str(mag)
            if not out:
                out = body if c > 0 else "-" + body
            else:
                out += ("+" if c > 0 else "-") + body
        return out

    def __repr__(self):
        return f"MultiChebScalar({self.render()})"


def _expand_reduced(orders, degs, raw_exps, coeff):
    """Expand a raw monomial (exponents possibly >= deg) into reduced terms."""
    pending = [(raw_exps, coeff)]
    for i, p in enumerate(orders):
        d = degs[i]
        nxt = []
        for exps, c in pending:
            e = exps[i]
            if e < d:
                nxt.append((exps, c))
                continue
            red = _power_reduction(p, e)
            for j, rc in enumerate(red):
                if rc:
                    ne = exps[:i] + (j,) + exps[i + 1 :]
                    nxt.append((ne, c * rc))
        pending = nxt
    return pending


def _solve_fraction_system(mat, rhs):
    """Gaussian elimination over Fractions; returns None if singular."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]
