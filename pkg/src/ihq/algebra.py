"""Graded-commutative rings given by structure constants, and Laurent
polynomials in the degree-2 equivariant parameter ``t`` over such rings.

A ring element is a tuple of :class:`~fractions.Fraction` coordinates over
the ring's full basis (all degrees concatenated, lowest degree first).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Element = tuple[Fraction, ...]

_ZERO = Fraction(0)


class RingError(ValueError):
    """A ring presentation violates one of its axioms."""


class NonInvertibleEuler(ValueError):
    pass


class RingPresentation:
    """Finite-dimensional graded-commutative ring over Q.

    ``dims`` maps degree to dimension.  ``products`` maps a pair of basis
    positions ``((deg_a, i), (deg_b, j))`` to the product written as a
    mapping ``{degree: coordinates}``.  Products with the unit are implied.
    Each entry also fixes the reversed product through the Koszul sign; an
    entry given in both orders must agree with that sign.  Missing products
    are zero.  ``integral`` lists the values of the integration functional on
    the top-degree basis.
    """

    def __init__(
        self,
        dims: Mapping[int, int],
        products: Mapping[tuple[tuple[int, int], tuple[int, int]], Mapping[int, Sequence]] | None = None,
        integral: Sequence = (1,),
        labels: Mapping[int, Sequence[str]] | None = None,
        top_degree: int | None = None,
    ):
        dims = {int(d): int(n) for d, n in dims.items() if int(n) != 0}
        if any(d < 0 or n < 0 for d, n in dims.items()):
            raise RingError("degrees and dimensions must be nonnegative")
        if dims.get(0) != 1:
            raise RingError("degree 0 must be one-dimensional (the unit)")
        self.dims = dict(sorted(dims.items()))
        self.top_degree = max(self.dims) if top_degree is None else int(top_degree)
        if self.top_degree < max(self.dims):
            raise RingError("basis elements above topDegree")
        self.offsets: dict[int, int] = {}
        degrees: list[int] = []
        for d, n in self.dims.items():
            self.offsets[d] = len(degrees)
            degrees.extend([d] * n)
        self.degrees = tuple(degrees)
        self.size = len(degrees)

        if labels is None:
            labels = {}
        names = []
        for d, n in self.dims.items():
            given = list(labels.get(d, ()))
            if given and len(given) != n:
                raise RingError(f"degree {d}: expected {n} labels, got {len(given)}")
            if not given:
                given = ["1"] if d == 0 else [f"e{d}_{k}" for k in range(n)]
            names.extend(given)
        self.labels = tuple(names)

        top_dim = self.dims.get(self.top_degree, 0)
        integral = tuple(Fraction(x) for x in integral)
        if len(integral) != top_dim:
            raise RingError(f"integral needs {top_dim} values on the top degree, got {len(integral)}")
        if top_dim and not any(integral):
            raise RingError("integral vanishes on the whole top degree")
        self.integral = integral

        self.table = self._build_table(products or {})
        self._check_axioms()

    # -- construction -------------------------------------------------
    def position(self, degree: int, index: int) -> int:
        if degree not in self.dims or not 0 <= index < self.dims[degree]:
            raise RingError(f"no basis element ({degree}, {index})")
        return self.offsets[degree] + index

    def element(self, parts: Mapping[int, Sequence] | None = None) -> Element:
        """Build an element from ``{degree: coordinates}``."""
        v = [_ZERO] * self.size
        for d, coords in (parts or {}).items():
            d = int(d)
            coords = list(coords)
            if len(coords) != self.dims.get(d, 0):
                raise RingError(f"degree {d}: expected {self.dims.get(d, 0)} coordinates, got {len(coords)}")
            for k, c in enumerate(coords):
                v[self.offsets[d] + k] = Fraction(c)
        return tuple(v)

    def basis_element(self, degree: int, index: int) -> Element:
        v = [_ZERO] * self.size
        v[self.position(degree, index)] = Fraction(1)
        return tuple(v)

    def unit(self) -> Element:
        return self.basis_element(0, 0)

    def zero(self) -> Element:
        return (_ZERO,) * self.size

    def scalar(self, c) -> Element:
        return tuple(Fraction(c) * x for x in self.unit())

    def parts(self, x: Element) -> dict[int, tuple[Fraction, ...]]:
        """Split into ``{degree: coordinates}``, dropping zero parts."""
        out = {}
        for d, n in self.dims.items():
            o = self.offsets[d]
            chunk = tuple(x[o:o + n])
            if any(chunk):
                out[d] = chunk
        return out

    def degree_part(self, x: Element, degree: int) -> tuple[Fraction, ...]:
        n = self.dims.get(degree, 0)
        o = self.offsets.get(degree, 0)
        return tuple(x[o:o + n])

    def support_degrees(self, x: Element) -> set[int]:
        return {self.degrees[i] for i, c in enumerate(x) if c}

    def integrate(self, x: Element) -> Fraction:
        top = self.degree_part(x, self.top_degree)
        return sum((a * b for a, b in zip(top, self.integral)), _ZERO)

    def _build_table(self, products) -> list[list[Element]]:
        n = self.size
        table: list[list[Element | None]] = [[None] * n for _ in range(n)]
        for i in range(n):
            e = self.basis_element(self.degrees[i], i - self.offsets[self.degrees[i]])
            table[0][i] = e
            table[i][0] = e
        for ((da, ia), (db, ib)), value in products.items():
            i, j = self.position(da, ia), self.position(db, ib)
            vec = self.element(value)
            bad = self.support_degrees(vec) - {da + db}
            if bad:
                raise RingError(f"product ({da},{ia})*({db},{ib}) has components in degree {sorted(bad)}")
            sign = -1 if (da * db) % 2 else 1
            mirror = tuple(sign * c for c in vec)
            for (a, b, v) in ((i, j, vec), (j, i, mirror)):
                if table[a][b] is not None and table[a][b] != v:
                    raise RingError(
                        f"product ({da},{ia})*({db},{ib}) conflicts with the unit or graded commutativity"
                    )
                table[a][b] = v
        zero = self.zero()
        return [[zero if v is None else v for v in row] for row in table]

    def _check_axioms(self) -> None:
        n = self.size
        for i in range(n):
            for j in range(n):
                sign = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
                if self.table[i][j] != tuple(sign * c for c in self.table[j][i]):
                    raise RingError(f"graded commutativity fails for basis pair ({self.labels[i]}, {self.labels[j]})")
        for i in range(1, n):
            for j in range(1, n):
                xy = self.table[i][j]
                for k in range(1, n):
                    left = ring_multiply(self, xy, _basis(self, k))
                    right = ring_multiply(self, _basis(self, i), self.table[j][k])
                    if left != right:
                        raise RingError(
                            "associativity fails for basis triple "
                            f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})"
                        )

    # -- identity -----------------------------------------------------
    def _key(self):
        return (tuple(self.dims.items()), self.top_degree, self.labels, self.integral,
                tuple(tuple(r) for r in self.table))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, RingPresentation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"RingPresentation(dims={self.dims}, top_degree={self.top_degree})"

    @property
    def is_point(self) -> bool:
        return self.size == 1 and self.top_degree == 0 and self.integral == (Fraction(1),)

    @classmethod
    def point(cls) -> "RingPresentation":
        return POINT


def _basis(r: RingPresentation, i: int) -> Element:
    v = [_ZERO] * r.size
    v[i] = Fraction(1)
    return tuple(v)


def ring_multiply(r: RingPresentation, x: Sequence[Fraction], y: Sequence[Fraction]) -> Element:
    if len(x) != r.size or len(y) != r.size:
        raise RingError("element does not belong to this ring")
    if r.size == 1:
        return (x[0] * y[0],)
    out = [_ZERO] * r.size
    table = r.table
    for i, a in enumerate(x):
        if not a:
            continue
        row = table[i]
        for j, b in enumerate(y):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(row[j]):
                if c:
                    out[k] += ab * c
    return tuple(out)


POINT = RingPresentation({0: 1}, integral=(1,))


@dataclass(frozen=True)
class LaurentElement:
    """Finite Laurent polynomial ``sum_j c_j t^j`` with ring coefficients.

    ``terms`` is kept sorted by exponent with zero coefficients removed, so
    dataclass equality is mathematical equality.
    """

    ring: RingPresentation
    terms: tuple[tuple[int, Element], ...] = ()

    @classmethod
    def make(cls, ring: RingPresentation, terms: Mapping[int, Sequence] | Iterable[tuple[int, Sequence]]):
        acc: dict[int, list[Fraction]] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for j, c in items:
            c = tuple(x if type(x) is Fraction else Fraction(x) for x in c)
            if len(c) != ring.size:
                raise RingError("coefficient does not belong to this ring")
            if j in acc:
                acc[j] = [a + b for a, b in zip(acc[j], c)]
            else:
                acc[j] = list(c)
        norm = tuple((int(j), tuple(c)) for j, c in sorted(acc.items()) if any(c))
        return cls(ring, norm)

    @classmethod
    def monomial(cls, ring: RingPresentation, power: int, coeff: Sequence) -> "LaurentElement":
        return cls.make(ring, {power: coeff})

    @classmethod
    def scalar(cls, ring: RingPresentation, c, power: int = 0) -> "LaurentElement":
        return cls.make(ring, {power: ring.scalar(c)})

    @classmethod
    def zero(cls, ring: RingPresentation) -> "LaurentElement":
        return cls(ring, ())

    def coefficient(self, power: int) -> Element:
        for j, c in self.terms:
            if j == power:
                return c
        return self.ring.zero()

    def powers(self) -> list[int]:
        return [j for j, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Homogeneous degree (``t`` has degree 2), or ``None`` if mixed.

        The zero element reports ``None``; use :meth:`is_homogeneous` to test
        membership in a given degree.
        """
        found = {self.ring_degree_shift(j, d) for j, c in self.terms for d in self.ring.support_degrees(c)}
        return found.pop() if len(found) == 1 else None

    @staticmethod
    def ring_degree_shift(power: int, ring_degree: int) -> int:
        return ring_degree + 2 * power

    def is_homogeneous(self, degree: int) -> bool:
        return all(self.ring.support_degrees(c) <= {degree - 2 * j} for j, c in self.terms)

    def _check_ring(self, other: "LaurentElement") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise RingError("Laurent elements over different rings")

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        self._check_ring(other)
        return LaurentElement.make(self.ring, list(self.terms) + list(other.terms))

    def __neg__(self) -> "LaurentElement":
        return self.scale(-1)

    def __sub__(self, other: "LaurentElement") -> "LaurentElement":
        return self + (-other)

    def scale(self, c) -> "LaurentElement":
        c = Fraction(c)
        if not c:
            return LaurentElement.zero(self.ring)
        return LaurentElement(self.ring, tuple((j, tuple(c * x for x in v)) for j, v in self.terms))

    def shift(self, k: int) -> "LaurentElement":
        """Multiply by ``t**k``."""
        return LaurentElement(self.ring, tuple((j + k, v) for j, v in self.terms))

    def __mul__(self, other: "LaurentElement") -> "LaurentElement":
        return laurent_multiply(self, other)


def laurent_multiply(a: LaurentElement, b: LaurentElement) -> LaurentElement:
    a._check_ring(b)
    r = a.ring
    if r.size == 1:
        acc: dict[int, Fraction] = {}
        for i, (x,) in a.terms:
            for j, (y,) in b.terms:
                acc[i + j] = acc.get(i + j, _ZERO) + x * y
        return LaurentElement(r, tuple((k, (v,)) for k, v in sorted(acc.items()) if v))
    out: dict[int, list[Fraction]] = {}
    for i, x in a.terms:
        for j, y in b.terms:
            prod = ring_multiply(r, x, y)
            if not any(prod):
                continue
            acc = out.setdefault(i + j, [_ZERO] * r.size)
            for k, c in enumerate(prod):
                if c:
                    acc[k] += c
    return LaurentElement.make(r, out)


def invert_euler(e: LaurentElement) -> LaurentElement:
    """Inverse of an equivariant Euler class in ``H*(F)(t)``.

    Writes ``e = lam t^n (1 + nu)`` with ``nu`` nilpotent and sums the
    geometric series; it stops after at most ``top_degree`` terms because
    each factor of ``nu`` raises the ring degree by at least 2.
    """
    r = e.ring
    deg = e.degree()
    if deg is None or deg < 2 or deg % 2:
        raise NonInvertibleEuler("non-invertible Euler class: not homogeneous of positive even degree")
    n = deg // 2
    lead = e.coefficient(n)
    lam = lead[0] if r.size else _ZERO
    if not lam or any(lead[1:]):
        raise NonInvertibleEuler(f"non-invertible Euler class: t^{n} coefficient is not a nonzero scalar")
    inv_lead = LaurentElement.scalar(r, 1 / lam, -n)
    nu = (e - LaurentElement.scalar(r, lam, n)) * inv_lead
    minus_nu = -nu
    total = LaurentElement.scalar(r, 1)
    power = total
    for _ in range(r.top_degree):
        power = power * minus_nu
        if power.is_zero():
            break
        total = total + power
    return total * inv_lead


def integrate_coefficients(a: LaurentElement) -> dict[int, Fraction]:
    """Apply the ring's integral to every ``t``-coefficient; zero entries dropped."""
    out = {}
    for j, c in a.terms:
        v = a.ring.integrate(c)
        if v:
            out[j] = v
    return out


def residue_integral(a: LaurentElement) -> Fraction:
    """Coefficient of ``t**-1`` after integrating over the ring."""
    return a.ring.integrate(a.coefficient(-1))
