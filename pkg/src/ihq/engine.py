"""Intersection cohomology of circle quotients from fixed-point data.

Two routes are computed and compared:

* the residue pairing ``Res_0 sum_{F+} int_F (a b)|_F / e_F`` on equivariant
  classes, whose radical is the kernel of the Kirwan map;
* the kernel ``K+ (+) K-`` of classes vanishing on one side of the level.

At a critical level the side of a component sitting on the level is decided
by its index (see :func:`ihq.model.classify`).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from . import linalg
from .algebra import LaurentElement, invert_euler, residue_integral
from .model import (
    CheckReport,
    EquivariantClass,
    Instance,
    Side,
    classify,
    euler_class,
    evaluation_rows,
    restriction_coords,
    validate_morse,
)


class EngineError(ValueError):
    """Mathematical failure: bad level or inconsistent input data."""


class InteriorError(EngineError):
    pass


class CriticalLevelError(EngineError):
    pass


ClassLike = Union[str, EquivariantClass, Mapping[str, object]]


@dataclass
class DegreeKernel:
    dim_h: int
    k_plus: list[list[Fraction]]
    k_minus: list[list[Fraction]]
    dim_k: int
    dim_ih: int

    @property
    def direct(self) -> bool:
        return len(self.k_plus) + len(self.k_minus) == self.dim_k


@dataclass
class KernelReport:
    level: Fraction
    per_degree: dict[int, DegreeKernel]
    direct: bool

    def betti(self, top: int) -> list[int]:
        return [self.per_degree[d].dim_ih for d in range(top + 1)]


@dataclass
class IHPresentation:
    level: Fraction
    mode: str
    reduced_dim: int
    dims: dict[int, int]
    representatives: dict[int, list[str]]
    structure: dict[tuple[int, int, int, int], list[Fraction]]
    integration: list[Fraction]
    pairing_matrices: dict[int, list[list[Fraction]]]
    plus: list[str] = field(default_factory=list)
    minus: list[str] = field(default_factory=list)

    def betti(self) -> list[int]:
        return [self.dims.get(d, 0) for d in range(self.reduced_dim + 1)]


def check_interior(inst: Instance, level) -> Fraction:
    level = Fraction(level)
    moments = inst.moment_values
    if not (min(moments) < level < max(moments)):
        raise InteriorError("level not in the interior of the moment image")
    return level


def is_critical(inst: Instance, level) -> bool:
    return any(F.moment == Fraction(level) for F in inst.components)


def sides(inst: Instance, level, *, flipped: bool = False) -> tuple[list[str], list[str]]:
    plus, minus = [], []
    for F in inst.components:
        (plus if classify(F, level, inst.dim_m, flipped=flipped) is Side.PLUS else minus).append(F.id)
    return plus, minus


def combine(inst: Instance, spec: ClassLike) -> EquivariantClass:
    """Resolve a class name, class, or ``{name: coefficient}`` combination."""
    if isinstance(spec, EquivariantClass):
        return spec
    if isinstance(spec, str):
        return inst.get_class(spec)
    terms = [(inst.get_class(n), Fraction(c)) for n, c in spec.items()]
    degrees = {c.degree for c, _ in terms}
    if len(degrees) != 1:
        raise EngineError("linear combination mixes degrees")
    restrictions = {}
    for F in inst.components:
        acc = LaurentElement.zero(F.cohomology)
        for c, coeff in terms:
            acc = acc + c.restrictions[F.id].scale(coeff)
        restrictions[F.id] = acc
    name = " + ".join(f"{c}*{n}" for n, c in spec.items())
    return EquivariantClass(name, degrees.pop(), restrictions)


def product(inst: Instance, a: EquivariantClass, b: EquivariantClass) -> EquivariantClass:
    """Pointwise product of restriction tuples."""
    return EquivariantClass(
        f"({a.name})*({b.name})",
        a.degree + b.degree,
        {F.id: a.restrictions[F.id] * b.restrictions[F.id] for F in inst.components},
    )


def from_coords(inst: Instance, d: int, coords) -> EquivariantClass:
    basis = inst.classes_of_degree(d)
    return combine(inst, {c.name: x for c, x in zip(basis, coords)}) if basis else EquivariantClass("0", d, {
        F.id: LaurentElement.zero(F.cohomology) for F in inst.components})


@functools.lru_cache(maxsize=1024)
def _inverse(e: LaurentElement) -> LaurentElement:
    return invert_euler(e)


class _Kirwan:
    """Per-(instance, level) working state with memoized linear algebra."""

    def __init__(self, inst: Instance, level, *, flipped: bool = False, check: bool = True):
        self.inst = inst
        self.level = check_interior(inst, level)
        if check:
            morse = validate_morse(inst)
            if not morse.ok:
                raise EngineError("instance fails validate_morse; the class basis is incomplete: "
                                  + "; ".join(morse.lines()[1:]))
        self.plus, self.minus = sides(inst, self.level, flipped=flipped)
        self.all_ids = [F.id for F in inst.components]
        self.top = inst.reduced_dim
        self._inv_euler = {F.id: _inverse(euler_class(F, inst.dim_m)) for F in inst.components}
        self._kernels: dict[int, DegreeKernel] = {}
        self._pairings: dict[int, list[list[Fraction]]] = {}

    def basis(self, d: int) -> list[EquivariantClass]:
        return self.inst.classes_of_degree(d)

    def side_kernel(self, side: Side, d: int) -> list[list[Fraction]]:
        ids = self.plus if side is Side.PLUS else self.minus
        basis = self.basis(d)
        return linalg.nullspace(evaluation_rows(self.inst, basis, ids), len(basis))

    def kernel(self, d: int) -> DegreeKernel:
        if d not in self._kernels:
            n = len(self.basis(d))
            kp = self.side_kernel(Side.PLUS, d)
            km = self.side_kernel(Side.MINUS, d)
            dim_k = linalg.rank(kp + km, n)
            self._kernels[d] = DegreeKernel(n, kp, km, dim_k, n - dim_k)
        return self._kernels[d]

    def kernel_rows(self, d: int) -> list[list[Fraction]]:
        k = self.kernel(d)
        red, _ = linalg.rref(k.k_plus + k.k_minus, k.dim_h)
        return red

    def pairing(self, a: EquivariantClass, b: EquivariantClass) -> Fraction:
        total = Fraction(0)
        for cid in self.plus:
            total += residue_integral(a.restrictions[cid] * b.restrictions[cid] * self._inv_euler[cid])
        return total

    def integrate(self, g: EquivariantClass) -> Fraction:
        total = Fraction(0)
        for cid in self.plus:
            total += residue_integral(g.restrictions[cid] * self._inv_euler[cid])
        return total

    def pairing_matrix(self, p: int) -> list[list[Fraction]]:
        """Residue pairing between the raw class bases of degrees p and top-p."""
        if p not in self._pairings:
            left, right = self.basis(p), self.basis(self.top - p)
            self._pairings[p] = [[self.pairing(a, b) for b in right] for a in left]
        return self._pairings[p]

    def class_coords(self, g: EquivariantClass) -> list[Fraction]:
        """Coordinates of ``g`` over the declared basis of its degree."""
        basis = self.basis(g.degree)
        rows = evaluation_rows(self.inst, basis, self.all_ids)
        target = restriction_coords(self.inst, g, self.all_ids)
        if not basis:
            if any(target):
                raise EngineError(f"class {g.name} is nonzero but degree {g.degree} has no basis")
            return []
        x = linalg.solve(rows, target, len(basis))
        if x is None:
            raise EngineError(f"class {g.name} is not in the span of the declared degree-{g.degree} classes")
        return x

    def in_kernel(self, d: int, v) -> bool:
        rows = self.kernel_rows(d)
        n = self.kernel(d).dim_h
        return linalg.rank(rows + [list(v)], n) == len(rows)


def kernel_side(inst: Instance, level, side: Side, d: int, *, flipped: bool = False) -> list[list[Fraction]]:
    """Basis (rows over the degree-``d`` class basis) of classes vanishing on ``side``."""
    return _Kirwan(inst, level, flipped=flipped, check=False).side_kernel(side, d)


def _betti(kw: _Kirwan) -> KernelReport:
    inst = kw.inst
    per = {d: kw.kernel(d) for d in range(inst.degree_bound + 1)}
    direct = all(k.direct for k in per.values())
    report = KernelReport(kw.level, per, direct)
    if not direct:
        bad = [d for d, k in per.items() if not k.direct]
        raise EngineError(f"input inconsistent: K+ and K- are not independent in degrees {bad}")
    above = [d for d, k in per.items() if d > kw.top and k.dim_ih]
    if above:
        raise EngineError(f"nonzero quotient above the reduced dimension in degrees {above}")
    return report


def ih_betti(inst: Instance, level, *, flipped: bool = False) -> KernelReport:
    return _betti(_Kirwan(inst, level, flipped=flipped))


def pairing(inst: Instance, level, alpha: ClassLike, beta: ClassLike, *, flipped: bool = False) -> Fraction:
    kw = _Kirwan(inst, level, flipped=flipped, check=False)
    return kw.pairing(combine(inst, alpha), combine(inst, beta))


def integrate_top(inst: Instance, level, gamma: ClassLike, *, flipped: bool = False) -> Fraction:
    g = combine(inst, gamma)
    if g.degree != inst.reduced_dim:
        raise EngineError(f"integrate_top needs degree {inst.reduced_dim}, got {g.degree}")
    return _Kirwan(inst, level, flipped=flipped, check=False).integrate(g)


def _presentation(kw: _Kirwan, mode: str) -> IHPresentation:
    inst = kw.inst
    _betti(kw)
    top = kw.top
    reps: dict[int, list[int]] = {}
    dims: dict[int, int] = {}
    for d in range(top + 1):
        basis = kw.basis(d)
        n = len(basis)
        rows = kw.kernel_rows(d)
        chosen: list[int] = []
        span = list(rows)
        for i in range(n):
            e = [Fraction(int(i == j)) for j in range(n)]
            if linalg.rank(span + [e], n) > len(span):
                span.append(e)
                chosen.append(i)
        reps[d] = chosen
        dims[d] = len(chosen)

    def reduce(d: int, v) -> list[Fraction]:
        n = len(kw.basis(d))
        gens = [[Fraction(int(i == j)) for j in range(n)] for i in reps[d]] + kw.kernel_rows(d)
        x = linalg.solve(linalg.transpose(gens, n), list(v), len(gens))
        if x is None:
            raise EngineError(f"degree {d}: vector outside the class span")
        return x[:len(reps[d])]

    # K must be an ideal, as far as the degree bound lets us see
    for d in range(inst.degree_bound + 1):
        rows = kw.kernel_rows(d)
        if not rows:
            continue
        for e in range(inst.degree_bound - d + 1):
            for b in kw.basis(e):
                for k in rows:
                    prod = product(inst, from_coords(inst, d, k), b)
                    if not kw.in_kernel(d + e, kw.class_coords(prod)):
                        raise EngineError(f"K not an ideal within degree bound (degree {d} times {b.name})")

    structure: dict[tuple[int, int, int, int], list[Fraction]] = {}
    for p in range(top + 1):
        for q in range(top + 1 - p):
            for i, a in enumerate(reps[p]):
                for j, b in enumerate(reps[q]):
                    prod = product(inst, kw.basis(p)[a], kw.basis(q)[b])
                    structure[(p, i, q, j)] = reduce(p + q, kw.class_coords(prod))

    integration = [kw.integrate(kw.basis(top)[i]) for i in reps[top]]
    pairings = {}
    for p in range(top + 1):
        raw = kw.pairing_matrix(p)
        pairings[p] = [[raw[i][j] for j in reps[top - p]] for i in reps[p]]

    return IHPresentation(
        level=kw.level,
        mode=mode,
        reduced_dim=top,
        dims=dims,
        representatives={d: [kw.basis(d)[i].name for i in idx] for d, idx in reps.items()},
        structure=structure,
        integration=integration,
        pairing_matrices=pairings,
        plus=list(kw.plus),
        minus=list(kw.minus),
    )


def ih_ring(inst: Instance, level, *, flipped: bool = False) -> IHPresentation:
    kw = _Kirwan(inst, level, flipped=flipped)
    return _presentation(kw, "singular" if is_critical(inst, kw.level) else "regular")


def reduced_cohomology_regular(inst: Instance, level) -> IHPresentation:
    level = check_interior(inst, level)
    if is_critical(inst, level):
        raise CriticalLevelError(f"level {level} is a critical value; use ih_ring for intersection cohomology")
    return _presentation(_Kirwan(inst, level), "regular")


def duality_check(p: IHPresentation, dim_m: int) -> CheckReport:
    report = CheckReport("duality_check")
    top = dim_m - 2
    if top == 0:
        report.notes.append("zero-dimensional reduction")
    for d in range(top + 1):
        a, b = p.dims.get(d, 0), p.dims.get(top - d, 0)
        if a != b:
            report.failures.append({"degree": d, "dim": a, "dual_degree": top - d, "dual_dim": b})
    for d in range(top + 1):
        m = p.pairing_matrices.get(d, [])
        rows, cols = p.dims.get(d, 0), p.dims.get(top - d, 0)
        r = linalg.rank(m, cols) if rows and cols else 0
        if rows != cols or r != rows:
            report.failures.append({"degree": d, "pairing_shape": f"{rows}x{cols}", "rank": r})
    return report


def crosscheck_theorems(inst: Instance, level, *, flipped: bool = False) -> CheckReport:
    """Compare the residue pairing with the ``K+ (+) K-`` kernel degree by degree."""
    report = CheckReport("crosscheck_theorems")
    kw = _Kirwan(inst, level, flipped=flipped, check=False)
    for p in range(kw.top + 1):
        k = kw.kernel(p)
        m = kw.pairing_matrix(p)
        n_right = len(kw.basis(kw.top - p))
        r = linalg.rank(m, n_right) if k.dim_h else 0
        if r != k.dim_ih:
            report.failures.append({"degree": p, "pairing_rank": r, "quotient_dim": k.dim_ih})
        radical = linalg.left_nullspace(m, k.dim_h, n_right)
        if not linalg.same_span(radical, kw.kernel_rows(p), k.dim_h):
            report.failures.append({"degree": p, "problem": "radical of the pairing differs from K"})
        if not k.direct:
            report.failures.append({"degree": p, "problem": "K+ and K- intersect"})
    if not is_critical(inst, kw.level) and not flipped:
        try:
            regular = reduced_cohomology_regular(inst, kw.level)
        except EngineError as exc:
            report.failures.append({"problem": f"regular pipeline failed: {exc}"})
        else:
            dims = {p: kw.kernel(p).dim_ih for p in range(kw.top + 1)}
            if regular.dims != dims:
                report.failures.append({"problem": "regular pipeline disagrees", "regular": regular.betti()})
            else:
                report.notes.append("regular level: agrees with reduced_cohomology_regular")
    return report


def quotient_coordinates(inst: Instance, pres: IHPresentation, g: ClassLike, *, flipped: bool = False) -> list[Fraction]:
    """Coordinates of the image of ``g`` over the representatives of ``pres``."""
    g = combine(inst, g)
    kw = _Kirwan(inst, pres.level, flipped=flipped, check=False)
    d = g.degree
    names = [c.name for c in kw.basis(d)]
    n = len(names)
    reps = [[Fraction(int(names.index(r) == j)) for j in range(n)] for r in pres.representatives.get(d, [])]
    gens = reps + kw.kernel_rows(d)
    if not gens:
        return []
    x = linalg.solve(linalg.transpose(gens, n), kw.class_coords(g), len(gens))
    if x is None:
        raise EngineError(f"class {g.name} is outside the declared span")
    return x[:len(reps)]
