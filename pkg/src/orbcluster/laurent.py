"""Laurent polynomials over the exact Chebyshev scalars.

Every arc label (boundary segments included) carries an x-variable; only
non-boundary labels carry a y-coefficient variable, and boundary labels are
frozen: no exchange relation ever divides by them.  Exponent vectors are
dense integer tuples (x-block then y-block), which keeps hashing and
lexicographic term ordering trivial.
"""

from __future__ import annotations

from fractions import Fraction

from orbcluster.chebring import MultiChebScalar

__all__ = ["VarTable", "LaurentPoly", "Monomial"]


class VarTable:
    """Ordered arc labels with boundary/pending flags and notch companions.

    `labels` fixes variable order (declaration order of the triangulation).
    Boundary labels carry an x-variable but no y-variable.  `pending` maps a
    label to the order p of the orbifold point its arc encloses.
    `companions` pairs a radius label r with the label used for its notched
    twin.
    """

    __slots__ = ("labels", "index", "boundary", "pending", "companions",
                 "nx", "ny", "_yslot")

    def __init__(self, labels, boundary=(), pending=None, companions=None):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate arc labels in VarTable")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "index", {a: i for i, a in enumerate(labels)})
        object.__setattr__(self, "boundary", frozenset(boundary))
        object.__setattr__(self, "pending", dict(pending or {}))
        object.__setattr__(self, "companions", dict(companions or {}))
        for b in self.boundary:
            if b not in self.index:
                raise ValueError(f"boundary label {b!r} not among labels")
        varying = [a for a in labels if a not in self.boundary]
        object.__setattr__(self, "nx", len(labels))
        object.__setattr__(self, "ny", len(varying))
        object.__setattr__(self, "_yslot", {a: i for i, a in enumerate(varying)})

    def __setattr__(self, *a):
        raise AttributeError("VarTable is immutable")

    def is_boundary(self, label) -> bool:
        return label in self.boundary

    def is_pending(self, label) -> bool:
        return label in self.pending

    def orders(self):
        return sorted(set(self.pending.values()))

    def __eq__(self, other):
        if not isinstance(other, VarTable):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.boundary == other.boundary
            and self.pending == other.pending
            and self.companions == other.companions
        )

    def __hash__(self):
        return hash((self.labels, self.boundary))

    @property
    def width(self) -> int:
        return self.nx + self.ny

    def zero_exps(self) -> tuple[int, ...]:
        return (0,) * self.width

    def slot_x(self, label) -> int | None:
        return self.index.get(label)

    def slot_y(self, label) -> int | None:
        s = self._yslot.get(label)
        return None if s is None else self.nx + s

    # ---- monomial constructors -----------------------------------------

    def one(self) -> "LaurentPoly":
        return LaurentPoly(self, {self.zero_exps(): MultiChebScalar.one()})

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def scalar(self, s) -> "LaurentPoly":
        s = MultiChebScalar._coerce(s)
        return LaurentPoly(self, {self.zero_exps(): s} if not s.is_zero() else {})

    def monomial(self, scalar=1, x=None, y=None) -> "LaurentPoly":
        """One term: scalar * prod x_a^e * prod y_a^e.  A y on a boundary
        label is an error (boundary arcs carry no coefficient variable)."""
        s = MultiChebScalar._coerce(scalar)
        if s.is_zero():
            return self.zero()
        exps = list(self.zero_exps())
        for label, e in (x or {}).items():
            slot = self.slot_x(label)
            if slot is None:
                raise KeyError(f"unknown arc label {label!r}")
            exps[slot] += e
        for label, e in (y or {}).items():
            if label in self.boundary:
                raise ValueError(f"boundary arc {label!r} cannot carry a y-variable")
            slot = self.slot_y(label)
            if slot is None:
                raise KeyError(f"unknown arc label {label!r}")
            exps[slot] += e
        return LaurentPoly(self, {tuple(exps): s})

    def x(self, label, power: int = 1) -> "LaurentPoly":
        return self.monomial(1, x={label: power})

    def y(self, label, power: int = 1) -> "LaurentPoly":
        return self.monomial(1, y={label: power})

    def describe_exps(self, exps) -> str:
        varying = [a for a in self.labels if a not in self.boundary]
        parts = []
        for i, label in enumerate(self.labels):
            if exps[i]:
                parts.append(f"x_{label}^{exps[i]}")
        for i, label in enumerate(varying):
            e = exps[self.nx + i]
            if e:
                parts.append(f"y_{label}^{e}")
        return "*".join(parts)


class LaurentPoly:
    """A finite sum of monomials with MultiChebScalar coefficients.

    Stored zero coefficients are dropped on construction, so object equality
    over the same table is plain dict equality.
    """

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms):
        object.__setattr__(self, "table", table)
        clean = {}
        for exps, c in terms.items():
            if isinstance(c, (int, Fraction)):
                c = MultiChebScalar.from_rational(c)
            if not c.is_zero():
                clean[tuple(exps)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    def _check(self, other: "LaurentPoly"):
        if self.table != other.table:
            raise ValueError("operands use different variable tables")

    # ---- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, MultiChebScalar)):
            other = self.table.scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = terms.get(e)
            terms[e] = c if acc is None else acc + c
        return LaurentPoly(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, MultiChebScalar)):
            other = self.table.scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, MultiChebScalar)):
            s = MultiChebScalar._coerce(other)
            return LaurentPoly(self.table, {e: c * s for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        acc: dict[tuple, MultiChebScalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                prev = acc.get(key)
                acc[key] = c if prev is None else prev + c
        return LaurentPoly(self.table, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only via divide_by_monomial")
        out = self.table.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divide_by_monomial(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact division by a single-term Laurent polynomial."""
        if isinstance(divisor, Monomial):
            divisor = divisor.poly
        self._check(divisor)
        if len(divisor.terms) != 1:
            raise ValueError("divisor must be a monomial (exactly one term)")
        (dexps, dscalar), = divisor.terms.items()
        inv = dscalar.inverse()
        return LaurentPoly(
            self.table,
            {
                tuple(a - b for a, b in zip(e, dexps)): c * inv
                for e, c in self.terms.items()
            },
        )

    def remap_variables(self, mapping: dict) -> "LaurentPoly":
        """Substitute x_label -> monomial for each label in `mapping`.

        The replacement must be a single term; negative source exponents are
        handled by inverting it.  Used for the loop/radius specialization.
        """
        reps = {}
        for label, mono in mapping.items():
            if isinstance(mono, Monomial):
                mono = mono.poly
            if len(mono.terms) != 1:
                raise ValueError("replacement must be a monomial")
            slot = self.table.slot_x(label)
            if slot is None:
                raise KeyError(f"cannot remap unknown/boundary label {label!r}")
            reps[slot] = next(iter(mono.terms.items()))
        out: dict[tuple, MultiChebScalar] = {}
        for exps, c in self.terms.items():
            exps = list(exps)
            scalar = c
            extra = [0] * len(exps)
            for slot, (rexps, rscalar) in reps.items():
                e = exps[slot]
                if not e:
                    continue
                exps[slot] = 0
                for i, re in enumerate(rexps):
                    extra[i] += re * e
                if e > 0:
                    scalar = scalar * rscalar**e
                else:
                    scalar = scalar * rscalar.inverse() ** (-e)
            key = tuple(a + b for a, b in zip(exps, extra))
            prev = out.get(key)
            scalar = scalar if prev is None else prev + scalar
            out[key] = scalar
        return LaurentPoly(self.table, out)

    # ---- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def as_monomial(self) -> "Monomial":
        if not self.is_monomial():
            raise ValueError("polynomial has more than one term")
        return Monomial(self)

    def num_terms(self) -> int:
        return len(self.terms)

    def coefficient(self, x=None, y=None) -> MultiChebScalar:
        probe = self.table.monomial(1, x=x, y=y)
        exps = next(iter(probe.terms))
        return self.terms.get(exps, MultiChebScalar.zero())

    def y_degrees_nonnegative(self) -> bool:
        n = self.table.nx
        return all(all(e >= 0 for e in exps[n:]) for exps in self.terms)

    def clearing_monomial(self) -> "LaurentPoly":
        """Smallest monomial m with self*m having all exponents >= 0."""
        if not self.terms:
            return self.table.one()
        width = self.table.width
        mins = [min(exps[i] for exps in self.terms) for i in range(width)]
        shift = tuple(-m if m < 0 else 0 for m in mins)
        return LaurentPoly(self.table, {shift: MultiChebScalar.one()})

    def numerator_form(self):
        """(numerator with nonnegative exponents, clearing monomial)."""
        clear = self.clearing_monomial()
        return self * clear, clear

    def min_numeric_coefficient(self) -> float:
        if not self.terms:
            return 0.0
        return min(c.evalf() for c in self.terms.values())

    def positivity_check(self, tol: float = 1e-9) -> bool:
        """True if every coefficient evaluates to >= -tol at l_p = 2cos(pi/p)."""
        return self.min_numeric_coefficient() >= -tol

    def is_integral(self) -> bool:
        return all(c.is_integral() for c in self.terms.values())

    def evalf(self, x_values=None, y_values=None) -> float:
        """Numeric evaluation; variables default to 1.0."""
        varying = [a for a in self.table.labels if a not in self.table.boundary]
        nx = self.table.nx
        xs = [float((x_values or {}).get(a, 1.0)) for a in self.table.labels]
        ys = [float((y_values or {}).get(a, 1.0)) for a in varying]
        acc = 0.0
        for exps, c in self.terms.items():
            t = c.evalf()
            for i in range(nx):
                if exps[i]:
                    t *= xs[i] ** exps[i]
            for i in range(self.table.ny):
                if exps[nx + i]:
                    t *= ys[i] ** exps[nx + i]
            acc += t
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MultiChebScalar)):
            other = self.table.scalar(other)
        if isinstance(other, Monomial):
            other = other.poly
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            body = self.table.describe_exps(exps)
            stxt = c.render()
            if not body:
                parts.append(stxt if ("+" not in stxt and "*" not in stxt) else f"({stxt})")
            elif stxt == "1":
                parts.append(body)
            elif stxt == "-1":
                parts.append(f"-{body}")
            elif "+" in stxt or "-" in stxt[1:] or "*" in stxt:
                parts.append(f"({stxt})*{body}")
            else:
                parts.append(f"{stxt}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"LaurentPoly({self.render()})"


class Monomial:
    """A single-term Laurent polynomial, used for edge and element weights."""

    __slots__ = ("poly",)

    def __init__(self, poly: LaurentPoly):
        if len(poly.terms) != 1:
            raise ValueError("Monomial requires exactly one term")
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, *a):
        raise AttributeError("Monomial is immutable")

    @property
    def table(self):
        return self.poly.table

    @property
    def scalar(self) -> MultiChebScalar:
        return next(iter(self.poly.terms.values()))

    @property
    def exps(self) -> tuple:
        return next(iter(self.poly.terms))

    def __mul__(self, other):
        if isinstance(other, Monomial):
            other = other.poly
        out = self.poly * other
        if isinstance(out, LaurentPoly) and len(out.terms) == 1:
            return Monomial(out)
        return out

    __rmul__ = __mul__

    def inverse(self) -> "Monomial":
        return Monomial(self.table.one().divide_by_monomial(self.poly))

    def __eq__(self, other):
        if isinstance(other, Monomial):
            other = other.poly
        return self.poly == other

    def __hash__(self):
        return hash(self.poly)

    def render(self) -> str:
        return self.poly.render()

    def __repr__(self):
        return f"Monomial({self.render()})"
