"""Fixed-point data of a Hamiltonian circle action, and the validators that
gate it before any Kirwan-map computation runs."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import (
    POINT,
    LaurentElement,
    NonInvertibleEuler,
    RingPresentation,
    integrate_coefficients,
    invert_euler,
)

log = logging.getLogger(__name__)


class InstanceError(ValueError):
    """Invalid instance data; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class Side(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class FixedComponent:
    id: str
    dim: int
    moment: Fraction
    weights: tuple[tuple[int, int], ...]
    cohomology: RingPresentation = POINT
    euler: LaurentElement | None = None

    @property
    def codim(self) -> int:
        return 2 * sum(m for _, m in self.weights)

    @property
    def euler_leading(self) -> Fraction:
        return Fraction(math.prod(k ** m for k, m in self.weights))


@dataclass(frozen=True)
class EquivariantClass:
    name: str
    degree: int
    restrictions: Mapping[str, LaurentElement] = field(default_factory=dict)

    def at(self, component_id: str) -> LaurentElement:
        return self.restrictions[component_id]


@dataclass(frozen=True)
class Instance:
    name: str
    dim_m: int
    components: tuple[FixedComponent, ...]
    classes: tuple[EquivariantClass, ...]
    degree_bound: int

    def component(self, cid: str) -> FixedComponent:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def get_class(self, name: str) -> EquivariantClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def classes_of_degree(self, d: int) -> list[EquivariantClass]:
        return [c for c in self.classes if c.degree == d]

    @property
    def moment_values(self) -> list[Fraction]:
        return [c.moment for c in self.components]

    @property
    def reduced_dim(self) -> int:
        return self.dim_m - 2


def index_of(F: FixedComponent) -> int:
    """Real dimension of the negative normal space."""
    return 2 * sum(m for k, m in F.weights if k < 0)


def classify(F: FixedComponent, level, dim_m: int, *, flipped: bool = False) -> Side:
    """Assign ``F`` to the plus or minus side of the reduction at ``level``.

    On the level itself the component goes to the plus side when its index is
    at most half its codimension.  ``flipped`` reverses that rule for level
    components only; it exists as a negative control.
    """
    level = Fraction(level)
    if F.moment > level:
        return Side.PLUS
    if F.moment < level:
        return Side.MINUS
    small = 2 * index_of(F) <= dim_m - F.dim
    if flipped:
        small = not small
    return Side.PLUS if small else Side.MINUS


def euler_class_isolated(F: FixedComponent, dim_m: int) -> LaurentElement:
    if F.dim != 0:
        raise ValueError(f"component {F.id} is not an isolated point")
    return LaurentElement.scalar(POINT, F.euler_leading, dim_m // 2)


def euler_class(F: FixedComponent, dim_m: int) -> LaurentElement:
    if F.euler is not None:
        return F.euler
    return euler_class_isolated(F, dim_m)


def make_component(cid, dim, moment, weights, cohomology=None, euler=None, dim_m=None) -> FixedComponent:
    """Build a component, merging repeated weights and auto-building the
    Euler class of an isolated point when ``dim_m`` is given."""
    merged: dict[int, int] = {}
    for k, m in weights:
        merged[int(k)] = merged.get(int(k), 0) + int(m)
    F = FixedComponent(
        id=str(cid),
        dim=int(dim),
        moment=Fraction(moment),
        weights=tuple(sorted(merged.items())),
        cohomology=cohomology if cohomology is not None else POINT,
        euler=euler,
    )
    if euler is None and F.dim == 0 and dim_m is not None:
        F = FixedComponent(F.id, F.dim, F.moment, F.weights, F.cohomology, euler_class_isolated(F, dim_m))
    return F


# ---------------------------------------------------------------------------
# structural checks

def check_component(F: FixedComponent, dim_m: int, path: str = "$") -> None:
    if F.dim < 0 or F.dim % 2:
        raise InstanceError(f"component {F.id!r}: dim must be even and nonnegative, got {F.dim}", f"{path}.dim")
    ks = [k for k, _ in F.weights]
    if len(set(ks)) != len(ks):
        raise InstanceError(f"component {F.id!r}: weights must be distinct", f"{path}.weights")
    for i, (k, m) in enumerate(F.weights):
        if k == 0 or m <= 0:
            raise InstanceError(f"component {F.id!r}: weight must be nonzero with positive multiplicity",
                                f"{path}.weights[{i}]")
    if F.codim != dim_m - F.dim:
        raise InstanceError(
            f"component {F.id!r}: weights span real codimension {F.codim}, expected {dim_m - F.dim}",
            f"{path}.weights")
    ring = F.cohomology
    if ring.top_degree != F.dim:
        raise InstanceError(f"component {F.id!r}: cohomology topDegree {ring.top_degree} != dim {F.dim}",
                            f"{path}.cohomology")
    if F.euler is None:
        raise InstanceError(f"component {F.id!r}: eulerClass is required for a non-isolated component",
                            f"{path}.eulerClass")
    e = F.euler
    if e.ring != ring:
        raise InstanceError(f"component {F.id!r}: eulerClass is over a different ring", f"{path}.eulerClass")
    n = F.codim // 2
    if not e.is_homogeneous(F.codim) or e.is_zero():
        raise InstanceError(f"component {F.id!r}: eulerClass must be homogeneous of degree {F.codim}",
                            f"{path}.eulerClass")
    if e.coefficient(n) != ring.scalar(F.euler_leading):
        raise InstanceError(f"component {F.id!r}: Euler leading term mismatch", f"{path}.eulerClass")
    try:
        invert_euler(e)
    except NonInvertibleEuler as exc:
        raise InstanceError(f"component {F.id!r}: {exc}", f"{path}.eulerClass") from None


def check_instance(inst: Instance) -> None:
    """Structural invariants; raises :class:`InstanceError` on the first violation."""
    if inst.dim_m <= 0 or inst.dim_m % 2:
        raise InstanceError("dimM must be even and positive", "$.dimM")
    if inst.degree_bound < inst.dim_m - 2:
        raise InstanceError(f"degreeBound must be at least dimM - 2 = {inst.dim_m - 2}", "$.degreeBound")
    if not inst.components:
        raise InstanceError("at least one fixed component is required", "$.components")
    ids = [c.id for c in inst.components]
    if len(set(ids)) != len(ids):
        raise InstanceError("component ids must be unique", "$.components")
    for i, F in enumerate(inst.components):
        check_component(F, inst.dim_m, f"$.components[{i}]")
    moments = inst.moment_values
    if not (min(moments) < 0 < max(moments)):
        raise InstanceError("need components with moment value both above and below 0", "$.components")
    top, bottom = max(moments), min(moments)
    for i, F in enumerate(inst.components):
        if F.moment == top and any(k > 0 for k, _ in F.weights):
            raise InstanceError(f"component {F.id!r} at the maximum must have only negative weights",
                                f"$.components[{i}].weights")
        if F.moment == bottom and any(k < 0 for k, _ in F.weights):
            raise InstanceError(f"component {F.id!r} at the minimum must have only positive weights",
                                f"$.components[{i}].weights")
    names = [c.name for c in inst.classes]
    if len(set(names)) != len(names):
        raise InstanceError("class names must be unique", "$.classes")
    for i, cls in enumerate(inst.classes):
        path = f"$.classes[{i}]"
        if cls.degree < 0:
            raise InstanceError(f"class {cls.name!r}: negative degree", f"{path}.degree")
        extra = set(cls.restrictions) - set(ids)
        if extra:
            raise InstanceError(f"class {cls.name!r}: unknown components {sorted(extra)}", f"{path}.restrictions")
        for F in inst.components:
            rpath = f"{path}.restrictions.{F.id}"
            if F.id not in cls.restrictions:
                raise InstanceError(f"class {cls.name!r}: missing restriction to {F.id!r}", rpath)
            a = cls.restrictions[F.id]
            if a.ring != F.cohomology:
                raise InstanceError(f"class {cls.name!r}: restriction to {F.id!r} over the wrong ring", rpath)
            if not a.is_homogeneous(cls.degree) or any(j < 0 for j in a.powers()):
                raise InstanceError(
                    f"class {cls.name!r}: restriction to {F.id!r} must be homogeneous of degree "
                    f"{cls.degree} with nonnegative powers of t", rpath)
    for d in sorted({c.degree for c in inst.classes}):
        group = inst.classes_of_degree(d)
        if linalg.rank(evaluation_rows(inst, group, ids), len(group)) != len(group):
            raise InstanceError(f"classes of degree {d} are linearly dependent", "$.classes")
    g = 0
    for F in inst.components:
        for k, _ in F.weights:
            g = math.gcd(g, k)
    if g > 1:
        log.warning("instance %s: all weights divisible by %d; the action is not effective", inst.name, g)


# ---------------------------------------------------------------------------
# coordinates of restriction tuples

def restriction_coords(inst: Instance, cls: EquivariantClass, component_ids: Sequence[str]) -> list[Fraction]:
    """Concatenated coordinates of ``cls`` at the given components.

    At each component the ``t**j`` coefficient is read in ring degree
    ``deg - 2j`` for ``j = 0 .. deg // 2``.
    """
    out: list[Fraction] = []
    d = cls.degree
    for cid in component_ids:
        ring = inst.component(cid).cohomology
        a = cls.restrictions[cid]
        for j in range(d // 2 + 1):
            out.extend(ring.degree_part(a.coefficient(j), d - 2 * j))
    return out


def evaluation_rows(inst: Instance, classes: Sequence[EquivariantClass], component_ids: Sequence[str]):
    """Matrix with one column per class and one row per coordinate."""
    cols = [restriction_coords(inst, c, component_ids) for c in classes]
    if not cols:
        return []
    return linalg.transpose(cols)


# ---------------------------------------------------------------------------
# validators

@dataclass
class CheckReport:
    check: str
    failures: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        if self.ok:
            return [f"{self.check}: pass"] + [f"  {n}" for n in self.notes]
        return [f"{self.check}: FAIL"] + [f"  {_describe(f)}" for f in self.failures]

    def as_dict(self) -> dict:
        return {"check": self.check, "ok": self.ok, "failures": self.failures, "notes": self.notes}


def _describe(f: Mapping) -> str:
    return ", ".join(f"{k}={v}" for k, v in f.items())


def localization_sum(inst: Instance, cls: EquivariantClass, component_ids=None) -> dict[int, Fraction]:
    """``sum_F int_F cls|_F / e_F`` as ``{power of t: coefficient}``."""
    if component_ids is None:
        component_ids = [F.id for F in inst.components]
    total: dict[int, Fraction] = {}
    for cid in component_ids:
        F = inst.component(cid)
        quotient = cls.restrictions[cid] * invert_euler(euler_class(F, inst.dim_m))
        for j, v in integrate_coefficients(quotient).items():
            total[j] = total.get(j, Fraction(0)) + v
    return {j: v for j, v in sorted(total.items()) if v}


def validate_abbv(inst: Instance, max_degree: int | None = None) -> CheckReport:
    """Full fixed-point sums must be polynomial in ``t``."""
    report = CheckReport("validate_abbv")
    for cls in inst.classes:
        if max_degree is not None and cls.degree > max_degree:
            continue
        bad = {j: v for j, v in localization_sum(inst, cls).items() if j < 0}
        if bad:
            report.failures.append({
                "class": cls.name,
                "exponents": sorted(bad),
                "coefficients": [str(bad[j]) for j in sorted(bad)],
            })
    return report


def morse_count(inst: Instance, d: int) -> int:
    total = 0
    for F in inst.components:
        rest = d - index_of(F)
        while rest >= 0:
            total += F.cohomology.dims.get(rest, 0)
            rest -= 2
    return total


def validate_morse(inst: Instance, max_degree: int | None = None) -> CheckReport:
    """Class counts per degree against the equivariantly perfect Morse count."""
    report = CheckReport("validate_morse")
    bound = inst.degree_bound if max_degree is None else min(inst.degree_bound, max_degree)
    for d in range(bound + 1):
        have = len(inst.classes_of_degree(d))
        want = morse_count(inst, d)
        if have != want:
            report.failures.append({"degree": d, "classes": have, "expected": want})
    return report


def validate_extrema(inst: Instance) -> CheckReport:
    report = CheckReport("validate_extrema")
    moments = inst.moment_values
    top, bottom = max(moments), min(moments)
    for F in inst.components:
        if F.moment == top and any(k > 0 for k, _ in F.weights):
            report.failures.append({"component": F.id, "problem": "maximum with a positive weight"})
        if F.moment == bottom and any(k < 0 for k, _ in F.weights):
            report.failures.append({"component": F.id, "problem": "minimum with a negative weight"})
    return report
