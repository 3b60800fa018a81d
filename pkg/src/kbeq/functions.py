"""Function representations: dense evaluation tables and structured solution forms.

Tables come in four kinds.  ``positive`` tables describe strictly positive
functions and store the *logarithm* of each value (exact rationals whenever
the table was synthesized, floats for imported data), so that the
multiplicative functional equation becomes exact additive arithmetic.
``real`` tables hold plain real values (log-domain working tables), ``sign``
tables hold +/-1, and ``complex`` tables hold either floating complex numbers
or :class:`Exact` values ``exp(log_abs) * exp(2*pi*i*turn)`` with rational
``log_abs`` and ``turn``, which keeps characters and sign structure exact.

The structured forms mirror the two classification results: positive
solutions are ``exp(P + l + r)`` / ``exp(P + m - r)`` with a quadratic form
``P``, additive maps ``l, m`` and a map ``r`` constant on cosets of the
doubled subgroup; Hermitian non-vanishing solutions add unimodular characters
and +/-1-valued maps constant on cosets of the quadrupled subgroup.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Optional, Sequence, Union

from .errors import (
    DomainSizeError,
    GroupMismatchError,
    GroupParseError,
    IncompatibleTablesError,
    SynthesisError,
)
from .groups import (
    CosetIndex,
    Domain,
    GroupElement,
    GroupSpec,
    Points,
    SubgroupSpec,
    domain_from_json,
    parse_group,
)

__all__ = [
    "Exact",
    "FuncTable",
    "QuadraticForm",
    "AdditiveMap",
    "CosetConstantMap",
    "CharacterSpec",
    "SignMap",
    "PositiveSolutionForm",
    "HermitianSolutionForm",
    "eval_positive",
    "eval_hermitian",
    "synth_table",
    "table_even_odd_split",
]

Rational = Union[int, Fraction]
RealValue = Union[int, Fraction, float]


# ---------------------------------------------------------------------------
# exact complex values


@dataclass(frozen=True)
class Exact:
    """``exp(log_abs) * exp(2*pi*i*turn)`` with rational data, or exactly zero."""

    log_abs: Fraction = Fraction(0)
    turn: Fraction = Fraction(0)
    zero: bool = False

    def __post_init__(self):
        if self.zero:
            object.__setattr__(self, "log_abs", Fraction(0))
            object.__setattr__(self, "turn", Fraction(0))
        else:
            object.__setattr__(self, "log_abs", Fraction(self.log_abs))
            object.__setattr__(self, "turn", Fraction(self.turn) % 1)

    @staticmethod
    def one() -> "Exact":
        return Exact()

    @staticmethod
    def zero_value() -> "Exact":
        return Exact(zero=True)

    @staticmethod
    def from_sign(s: int) -> "Exact":
        if s == 1:
            return Exact()
        if s == -1:
            return Exact(turn=Fraction(1, 2))
        raise ValueError(f"sign must be +1 or -1, got {s}")

    @staticmethod
    def from_log(q: Rational) -> "Exact":
        return Exact(log_abs=Fraction(q))

    @staticmethod
    def unit(turn: Rational) -> "Exact":
        return Exact(turn=Fraction(turn))

    def __mul__(self, other: "Exact") -> "Exact":
        if self.zero or other.zero:
            return Exact.zero_value()
        return Exact(self.log_abs + other.log_abs, self.turn + other.turn)

    def __truediv__(self, other: "Exact") -> "Exact":
        if other.zero:
            raise ZeroDivisionError("division by exact zero")
        if self.zero:
            return Exact.zero_value()
        return Exact(self.log_abs - other.log_abs, self.turn - other.turn)

    def conj(self) -> "Exact":
        if self.zero:
            return self
        return Exact(self.log_abs, -self.turn)

    def power(self, n: int) -> "Exact":
        if self.zero:
            if n <= 0:
                raise ZeroDivisionError("zero to a nonpositive power")
            return self
        return Exact(n * self.log_abs, n * self.turn)

    def is_one(self) -> bool:
        return not self.zero and self.log_abs == 0 and self.turn == 0

    def as_sign(self) -> Optional[int]:
        """+1 or -1 when the value is exactly that, else None."""
        if self.zero or self.log_abs != 0:
            return None
        if self.turn == 0:
            return 1
        if self.turn == Fraction(1, 2):
            return -1
        return None

    def to_complex(self) -> complex:
        if self.zero:
            return 0j
        return math.exp(self.log_abs) * cmath.exp(2j * math.pi * float(self.turn))


ComplexValue = Union[Exact, complex, float, int]


def cval(v: ComplexValue) -> complex:
    if isinstance(v, Exact):
        return v.to_complex()
    return complex(v)


def cmul(u: ComplexValue, v: ComplexValue) -> ComplexValue:
    if isinstance(u, Exact) and isinstance(v, Exact):
        return u * v
    return cval(u) * cval(v)


def cconj(u: ComplexValue) -> ComplexValue:
    if isinstance(u, Exact):
        return u.conj()
    return cval(u).conjugate()


def value_is_zero(v) -> bool:
    if isinstance(v, Exact):
        return v.zero
    return v == 0


def values_equal(u, v, tol: float) -> bool:
    """Exact equality for exact values, absolute tolerance otherwise."""
    if isinstance(u, Exact) and isinstance(v, Exact):
        return u == v
    if isinstance(u, (int, Fraction)) and isinstance(v, (int, Fraction)):
        return u == v
    return abs(cval(u) - cval(v)) <= tol


# ---------------------------------------------------------------------------
# tables

KIND_REAL = "real"
KIND_POSITIVE = "positive"
KIND_SIGN = "sign"
KIND_COMPLEX = "complex"
_KINDS = (KIND_REAL, KIND_POSITIVE, KIND_SIGN, KIND_COMPLEX)


class FuncTable:
    """Finitely supported evaluation table over a domain of a group.

    ``values`` maps every domain point to a stored value whose meaning
    depends on ``kind``; positive tables store ``log f(x)``.
    """

    __slots__ = ("group", "domain", "kind", "values", "_points", "_index", "_memo")

    def __init__(self, group: GroupSpec, domain: Domain, kind: str,
                 values: Mapping[GroupElement, object]):
        if kind not in _KINDS:
            raise IncompatibleTablesError(f"unknown table kind {kind!r}")
        self.group = group
        self.domain = domain
        self.kind = kind
        self.values = dict(values)
        self._points = None
        self._index = None
        self._memo = {}
        self._validate()

    def _validate(self):
        pts = self.points()
        if len(self.values) != len(pts) or any(p not in self.values for p in pts):
            raise IncompatibleTablesError(
                "table keys must equal the enumerated domain exactly"
            )
        check = _VALUE_CHECKS[self.kind]
        for p, v in self.values.items():
            if not check(v):
                raise IncompatibleTablesError(
                    f"value {v!r} at {p} is invalid for kind {self.kind!r}"
                )

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_function(cls, group: GroupSpec, domain: Domain, kind: str,
                      fn: Callable[[GroupElement], object]) -> "FuncTable":
        return cls(group, domain, kind, {p: fn(p) for p in domain.points(group)})

    # -- access ---------------------------------------------------------------

    def points(self) -> list[GroupElement]:
        if self._points is None:
            self._points = self.domain.points(self.group)
        return self._points

    def index_of(self, x: GroupElement) -> int:
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.points())}
        return self._index[x]

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.values

    def value(self, x: GroupElement):
        """Stored value (the log for positive tables)."""
        return self.values[x]

    def func_value(self, x: GroupElement):
        """The represented function's value at ``x`` (float/complex/int)."""
        v = self.values[x]
        if self.kind == KIND_POSITIVE:
            return math.exp(float(v))
        if self.kind == KIND_COMPLEX:
            return cval(v)
        if isinstance(v, Fraction):
            return float(v)
        return v

    def zero_free(self) -> bool:
        return all(not value_is_zero(v) for v in self.values.values())

    # -- conversions -----------------------------------------------------------

    def as_real_log(self) -> "FuncTable":
        """Positive table viewed as the real table of its logs."""
        if self.kind != KIND_POSITIVE:
            raise IncompatibleTablesError("as_real_log needs a positive table")
        out = FuncTable(self.group, self.domain, KIND_REAL, self.values)
        out._memo = self._memo  # same values, same numeric encodings
        return out

    def abs_log_table(self) -> "FuncTable":
        """Positive table of ``log |f|``; requires a zero-free table."""
        out = {}
        for p, v in self.values.items():
            if self.kind == KIND_POSITIVE:
                out[p] = v
            elif self.kind == KIND_SIGN:
                out[p] = Fraction(0)
            elif self.kind == KIND_COMPLEX:
                if isinstance(v, Exact):
                    if v.zero:
                        raise IncompatibleTablesError("zero value has no log")
                    out[p] = v.log_abs
                else:
                    a = abs(complex(v))
                    if a == 0:
                        raise IncompatibleTablesError("zero value has no log")
                    out[p] = math.log(a)
            else:
                raise IncompatibleTablesError("abs_log_table needs a multiplicative kind")
        return FuncTable(self.group, self.domain, KIND_POSITIVE, out)

    def unimodular_part(self) -> "FuncTable":
        """Complex table ``f / |f|``; requires a zero-free table."""
        out = {}
        for p, v in self.values.items():
            if self.kind == KIND_SIGN:
                out[p] = Exact.from_sign(v)
            elif self.kind == KIND_POSITIVE:
                out[p] = Exact.one()
            elif self.kind == KIND_COMPLEX:
                if isinstance(v, Exact):
                    if v.zero:
                        raise IncompatibleTablesError("zero value has no phase")
                    out[p] = Exact.unit(v.turn)
                else:
                    c = complex(v)
                    if c == 0:
                        raise IncompatibleTablesError("zero value has no phase")
                    out[p] = c / abs(c)
            else:
                raise IncompatibleTablesError("unimodular_part needs a multiplicative kind")
        return FuncTable(self.group, self.domain, KIND_COMPLEX, out)

    def restrict(self, points: Sequence[GroupElement]) -> "FuncTable":
        pts = tuple(sorted(points, key=lambda p: p.coords))
        return FuncTable(self.group, Points(pts), self.kind,
                         {p: self.values[p] for p in pts})

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        vals = [[list(p.coords), _value_to_json(self.kind, self.values[p])]
                for p in self.points()]
        return {
            "group": str(self.group),
            "domain": self.domain.to_json(),
            "kind": self.kind,
            "values": vals,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FuncTable":
        group = parse_group(obj["group"])
        domain = domain_from_json(obj["domain"])
        kind = obj["kind"]
        if kind not in _KINDS:
            raise GroupParseError(f"unknown table kind {kind!r}")
        values = {}
        for coords, raw in obj["values"]:
            values[group.element(coords)] = _value_from_json(kind, raw)
        return cls(group, domain, kind, values)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FuncTable)
                and self.group == other.group
                and self.domain == other.domain
                and self.kind == other.kind
                and self.values == other.values)

    def __repr__(self) -> str:
        return (f"FuncTable({self.group}, kind={self.kind}, "
                f"{len(self.values)} points)")


_VALUE_CHECKS = {
    KIND_REAL: lambda v: isinstance(v, (int, Fraction, float))
    and not isinstance(v, bool),
    KIND_POSITIVE: lambda v: isinstance(v, (int, Fraction, float))
    and not isinstance(v, bool)
    and not (isinstance(v, float) and math.isnan(v)),
    KIND_SIGN: lambda v: isinstance(v, int) and not isinstance(v, bool)
    and v in (1, -1),
    KIND_COMPLEX: lambda v: isinstance(v, (Exact, complex, int, float, Fraction))
    and not isinstance(v, bool),
}


def _rat_to_json(q: Rational) -> list[int]:
    f = Fraction(q)
    return [f.numerator, f.denominator]


def _rat_from_json(raw) -> Fraction:
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return Fraction(int(raw[0]), int(raw[1]))
    raise GroupParseError(f"expected [num, den] rational, got {raw!r}")


def _value_to_json(kind: str, v):
    if kind == KIND_SIGN:
        return int(v)
    if kind in (KIND_REAL, KIND_POSITIVE):
        if isinstance(v, (int, Fraction)):
            payload = _rat_to_json(v)
            return {"log": payload} if kind == KIND_POSITIVE else payload
        return {"log": float(v)} if kind == KIND_POSITIVE else float(v)
    # complex
    if isinstance(v, Exact):
        if v.zero:
            return 0
        return {"log": _rat_to_json(v.log_abs), "turn": _rat_to_json(v.turn)}
    c = complex(v)
    return [c.real, c.imag]


def _value_from_json(kind: str, raw):
    if kind == KIND_SIGN:
        if raw in (1, -1):
            return int(raw)
        raise GroupParseError(f"sign value must be +-1, got {raw!r}")
    if kind == KIND_REAL:
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            return float(raw) if isinstance(raw, float) else Fraction(raw)
        return _rat_from_json(raw)
    if kind == KIND_POSITIVE:
        if isinstance(raw, dict) and "log" in raw:
            inner = raw["log"]
            if isinstance(inner, (int, float)) and not isinstance(inner, bool):
                return float(inner)
            return _rat_from_json(inner)
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            if raw <= 0:
                raise GroupParseError(f"positive table value must be > 0, got {raw!r}")
            return math.log(float(raw))
        raise GroupParseError(f"cannot parse positive value {raw!r}")
    # complex
    if raw == 0:
        return Exact.zero_value()
    if isinstance(raw, dict) and "turn" in raw:
        return Exact(_rat_from_json(raw["log"]), _rat_from_json(raw["turn"]))
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return complex(float(raw[0]), float(raw[1]))
    raise GroupParseError(f"cannot parse complex value {raw!r}")


def table_even_odd_split(table: FuncTable) -> tuple[FuncTable, FuncTable]:
    """Split a real table into its even and odd parts; ``T = T_even + T_odd``."""
    if table.kind != KIND_REAL:
        raise IncompatibleTablesError("even/odd split needs a real table")
    if not table.domain.negation_closed(table.group):
        raise DomainSizeError("even/odd split needs a negation-closed domain")
    even, odd = {}, {}
    for p in table.points():
        v, w = table.values[p], table.values[-p]
        even[p] = _half(v + w)
        odd[p] = _half(v - w)
    return (FuncTable(table.group, table.domain, KIND_REAL, even),
            FuncTable(table.group, table.domain, KIND_REAL, odd))


def _half(v: RealValue) -> RealValue:
    if isinstance(v, float):
        return v / 2.0
    return Fraction(v) / 2


# ---------------------------------------------------------------------------
# structured parts


@dataclass(frozen=True)
class QuadraticForm:
    """``P(x) = x^T B x`` with B symmetric rational; torsion rows are zero.

    A real-valued biadditive form kills torsion coordinates (any finite
    subgroup of the reals is trivial), so the zero rows are structural.
    """

    group: GroupSpec
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        d = self.group.dim
        mat = tuple(tuple(Fraction(v) for v in row) for row in self.matrix)
        if len(mat) != d or any(len(row) != d for row in mat):
            raise GroupMismatchError("quadratic form matrix must be dim x dim")
        for i in range(d):
            for j in range(d):
                if mat[i][j] != mat[j][i]:
                    raise GroupMismatchError("quadratic form matrix must be symmetric")
                if (i >= self.group.rank or j >= self.group.rank) and mat[i][j]:
                    raise GroupMismatchError(
                        "quadratic form must vanish on torsion coordinates"
                    )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def zero(cls, group: GroupSpec) -> "QuadraticForm":
        d = group.dim
        return cls(group, tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d)))

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.matrix for v in row)

    def bilinear(self, x: GroupElement, y: GroupElement) -> Fraction:
        total = Fraction(0)
        r = self.group.rank
        for i in range(r):
            if x.coords[i]:
                row = self.matrix[i]
                for j in range(r):
                    if y.coords[j]:
                        total += row[j] * x.coords[i] * y.coords[j]
        return total

    def value(self, x: GroupElement) -> Fraction:
        return self.bilinear(x, x)


@dataclass(frozen=True)
class AdditiveMap:
    """Rational homomorphism into the reals; zero on the torsion part."""

    group: GroupSpec
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(v) for v in self.coeffs)
        if len(coeffs) != self.group.rank:
            raise GroupMismatchError("additive map needs one coefficient per free coordinate")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, group: GroupSpec) -> "AdditiveMap":
        return cls(group, tuple(Fraction(0) for _ in range(group.rank)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def value(self, x: GroupElement) -> Fraction:
        return sum((c * x.coords[j] for j, c in enumerate(self.coeffs)),
                   Fraction(0))


@dataclass(frozen=True)
class CosetConstantMap:
    """Real map depending on x only through its coset modulo ``X^(2)``."""

    group: GroupSpec
    entries: tuple[tuple[CosetIndex, Fraction], ...]

    def __post_init__(self):
        ent = tuple(sorted(((idx, Fraction(v)) for idx, v in self.entries),
                           key=lambda t: t[0].residues))
        expected = self.group.coset_indices(2)
        if [idx for idx, _ in ent] != expected:
            raise GroupMismatchError(
                "coset map must assign exactly one value per coset of X^(2)"
            )
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "_table", dict(ent))

    @classmethod
    def from_mapping(cls, group: GroupSpec,
                     mapping: Mapping[CosetIndex, Rational]) -> "CosetConstantMap":
        return cls(group, tuple(mapping.items()))

    @classmethod
    def zero(cls, group: GroupSpec) -> "CosetConstantMap":
        return cls(group, tuple((idx, Fraction(0)) for idx in group.coset_indices(2)))

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.entries)

    def at(self, idx: CosetIndex) -> Fraction:
        return self._table[idx]

    def value(self, x: GroupElement) -> Fraction:
        return self._table[self.group.coset_index(x, 2)]

    def negated(self) -> "CosetConstantMap":
        return CosetConstantMap(self.group,
                                tuple((idx, -v) for idx, v in self.entries))

    @property
    def modulus(self) -> int:
        return 2


@dataclass(frozen=True)
class CharacterSpec:
    """Unimodular multiplicative function given by rational turns per generator."""

    group: GroupSpec
    free_turns: tuple[Fraction, ...]
    torsion_exponents: tuple[int, ...]

    def __post_init__(self):
        turns = tuple(Fraction(t) for t in self.free_turns)
        exps = tuple(int(k) for k in self.torsion_exponents)
        if len(turns) != self.group.rank:
            raise GroupMismatchError("need one turn per free coordinate")
        if len(exps) != len(self.group.torsion):
            raise GroupMismatchError("need one exponent per torsion coordinate")
        exps = tuple(k % n for k, n in zip(exps, self.group.torsion))
        object.__setattr__(self, "free_turns", turns)
        object.__setattr__(self, "torsion_exponents", exps)

    @classmethod
    def trivial(cls, group: GroupSpec) -> "CharacterSpec":
        return cls(group, (Fraction(0),) * group.rank,
                   (0,) * len(group.torsion))

    def is_trivial(self) -> bool:
        return (all(t == 0 for t in self.free_turns)
                and all(k == 0 for k in self.torsion_exponents))

    def turn(self, x: GroupElement) -> Fraction:
        total = Fraction(0)
        for j, t in enumerate(self.free_turns):
            total += t * x.coords[j]
        for i, (k, n) in enumerate(zip(self.torsion_exponents, self.group.torsion)):
            total += Fraction(k * x.coords[self.group.rank + i], n)
        return total % 1

    def value(self, x: GroupElement) -> Exact:
        return Exact.unit(self.turn(x))


@dataclass(frozen=True)
class SignMap:
    """+/-1-valued map constant on cosets of ``X^(modulus)``.

    Forced to 1 on every coset contained in ``X^(2)`` and symmetric under
    negation of the coset (the underlying functions are even).
    """

    group: GroupSpec
    modulus: int
    entries: tuple[tuple[CosetIndex, int], ...]

    def __post_init__(self):
        if self.modulus not in (2, 4):
            raise GroupMismatchError("sign map modulus must be 2 or 4")
        ent = tuple(sorted(((idx, int(v)) for idx, v in self.entries),
                           key=lambda t: t[0].residues))
        expected = self.group.coset_indices(self.modulus)
        if [idx for idx, _ in ent] != expected:
            raise GroupMismatchError(
                f"sign map must assign exactly one value per coset of X^({self.modulus})"
            )
        table = dict(ent)
        for idx, v in ent:
            if v not in (1, -1):
                raise GroupMismatchError(f"sign map value must be +-1, got {v!r}")
            if self._inside_doubled(idx) and v != 1:
                raise GroupMismatchError(
                    "sign map must be 1 on cosets contained in X^(2)"
                )
            if table[self.group.coset_negate(idx)] != v:
                raise GroupMismatchError("sign map must be even (symmetric under negation)")
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "_table", table)

    def _inside_doubled(self, idx: CosetIndex) -> bool:
        if self.modulus == 2:
            return all(r == 0 for r in idx.residues)
        return all(r == 0 for r in self.group.coset_project(idx).residues)

    @classmethod
    def from_mapping(cls, group: GroupSpec, modulus: int,
                     mapping: Mapping[CosetIndex, int]) -> "SignMap":
        return cls(group, modulus, tuple(mapping.items()))

    @classmethod
    def trivial(cls, group: GroupSpec, modulus: int = 4) -> "SignMap":
        return cls(group, modulus,
                   tuple((idx, 1) for idx in group.coset_indices(modulus)))

    def is_trivial(self) -> bool:
        return all(v == 1 for _, v in self.entries)

    def at(self, idx: CosetIndex) -> int:
        return self._table[idx]

    def value(self, x: GroupElement) -> int:
        return self._table[self.group.coset_index(x, self.modulus)]

    def constant_on_doubled_cosets(self) -> bool:
        """True iff the map factors through cosets of ``X^(2)``."""
        if self.modulus == 2:
            return True
        seen: dict[CosetIndex, int] = {}
        for idx, v in self.entries:
            key = self.group.coset_project(idx)
            if seen.setdefault(key, v) != v:
                return False
        return True


# ---------------------------------------------------------------------------
# solution forms


@dataclass(frozen=True)
class PositiveSolutionForm:
    """Positive solution pair ``f = exp(P+l+r)``, ``g = exp(P+m-r)``."""

    P: QuadraticForm
    l: AdditiveMap
    m: AdditiveMap
    r: CosetConstantMap

    def __post_init__(self):
        g = self.P.group
        if not (self.l.group == g == self.m.group == self.r.group):
            raise GroupMismatchError("form components must share one group")

    @property
    def group(self) -> GroupSpec:
        return self.P.group

    @classmethod
    def zero(cls, group: GroupSpec) -> "PositiveSolutionForm":
        return cls(QuadraticForm.zero(group), AdditiveMap.zero(group),
                   AdditiveMap.zero(group), CosetConstantMap.zero(group))

    def log_pair(self, x: GroupElement) -> tuple[Fraction, Fraction]:
        p = self.P.value(x)
        r = self.r.value(x)
        return p + self.l.value(x) + r, p + self.m.value(x) - r

    def to_json(self) -> dict:
        return {
            "type": "positive",
            "group": str(self.group),
            "P": [[_rat_to_json(v) for v in row] for row in self.P.matrix],
            "l": [_rat_to_json(v) for v in self.l.coeffs],
            "m": [_rat_to_json(v) for v in self.m.coeffs],
            "r": _coset_map_to_json(self.r),
        }


@dataclass(frozen=True)
class HermitianSolutionForm:
    """Hermitian non-vanishing solution pair, optionally restricted to a support subgroup."""

    alpha: CharacterSpec
    beta: CharacterSpec
    a: SignMap
    b: SignMap
    P: QuadraticForm
    r: CosetConstantMap
    support: Optional[SubgroupSpec] = None

    def __post_init__(self):
        g = self.alpha.group
        same = (self.beta.group == g == self.a.group == self.b.group
                == self.P.group == self.r.group)
        if not same or (self.support is not None and self.support.group != g):
            raise GroupMismatchError("form components must share one group")
        if self.a.modulus != 4 or self.b.modulus != 4:
            raise GroupMismatchError("hermitian sign maps use modulus 4")

    @property
    def group(self) -> GroupSpec:
        return self.alpha.group

    def in_support(self, x: GroupElement) -> bool:
        return self.support is None or self.support.contains(x)

    def exact_pair(self, x: GroupElement) -> tuple[Exact, Exact]:
        if not self.in_support(x):
            return Exact.zero_value(), Exact.zero_value()
        p = self.P.value(x)
        r = self.r.value(x)
        fa = Exact(p + r, self.alpha.turn(x)) * Exact.from_sign(self.a.value(x))
        gb = Exact(p - r, self.beta.turn(x)) * Exact.from_sign(self.b.value(x))
        return fa, gb

    def to_json(self) -> dict:
        return {
            "type": "hermitian",
            "group": str(self.group),
            "alpha": _character_to_json(self.alpha),
            "beta": _character_to_json(self.beta),
            "a": _sign_map_to_json(self.a),
            "b": _sign_map_to_json(self.b),
            "P": [[_rat_to_json(v) for v in row] for row in self.P.matrix],
            "r": _coset_map_to_json(self.r),
            "support": None if self.support is None else
            [list(g.coords) for g in self.support.generators],
        }


def _coset_map_to_json(m: CosetConstantMap) -> dict:
    return {
        "modulus": 2,
        "table": [[list(idx.residues), _rat_to_json(v)] for idx, v in m.entries],
    }


def _character_to_json(c: CharacterSpec) -> dict:
    return {
        "free_turns": [_rat_to_json(t) for t in c.free_turns],
        "torsion_exponents": list(c.torsion_exponents),
    }


def _sign_map_to_json(s: SignMap) -> dict:
    return {
        "modulus": s.modulus,
        "table": [[list(idx.residues), v] for idx, v in s.entries],
    }


def coset_map_from_json(group: GroupSpec, obj: dict) -> CosetConstantMap:
    entries = [(CosetIndex(2, tuple(res)), _rat_from_json(raw))
               for res, raw in obj["table"]]
    return CosetConstantMap(group, tuple(entries))


def character_from_json(group: GroupSpec, obj: dict) -> CharacterSpec:
    return CharacterSpec(group,
                         tuple(_rat_from_json(t) for t in obj["free_turns"]),
                         tuple(obj["torsion_exponents"]))


def sign_map_from_json(group: GroupSpec, obj: dict) -> SignMap:
    m = int(obj["modulus"])
    entries = [(CosetIndex(m, tuple(res)), int(v)) for res, v in obj["table"]]
    return SignMap(group, m, tuple(entries))


def form_from_json(obj: dict):
    group = parse_group(obj["group"])
    mat = tuple(tuple(_rat_from_json(v) for v in row) for row in obj["P"])
    P = QuadraticForm(group, mat)
    r = coset_map_from_json(group, obj["r"])
    if obj["type"] == "positive":
        return PositiveSolutionForm(
            P,
            AdditiveMap(group, tuple(_rat_from_json(v) for v in obj["l"])),
            AdditiveMap(group, tuple(_rat_from_json(v) for v in obj["m"])),
            r,
        )
    if obj["type"] == "hermitian":
        support = None
        if obj.get("support") is not None:
            support = SubgroupSpec(
                group, tuple(group.element(c) for c in obj["support"])
            )
        return HermitianSolutionForm(
            character_from_json(group, obj["alpha"]),
            character_from_json(group, obj["beta"]),
            sign_map_from_json(group, obj["a"]),
            sign_map_from_json(group, obj["b"]),
            P, r, support,
        )
    raise GroupParseError(f"unknown form type {obj.get('type')!r}")


# ---------------------------------------------------------------------------
# evaluation and synthesis


def eval_positive(form: PositiveSolutionForm,
                  x: GroupElement) -> tuple[float, float]:
    """Evaluate a positive form; returns the pair ``(f(x), g(x))`` as floats."""
    tf, tg = form.log_pair(x)
    return math.exp(float(tf)), math.exp(float(tg))


def eval_hermitian(form: HermitianSolutionForm,
                   x: GroupElement) -> tuple[complex, complex]:
    """Evaluate a Hermitian form; zero outside the support subgroup."""
    fa, gb = form.exact_pair(x)
    return fa.to_complex(), gb.to_complex()


def synth_table(form, domain: Domain) -> tuple[FuncTable, FuncTable]:
    """Render a form as a pair of dense tables over a domain.

    Positive forms always produce genuine solution pairs.  Hermitian forms
    are synthesized only when they satisfy the sufficient condition (sign
    maps constant on cosets of ``X^(2)`` with pointwise product 1, or the
    support-restricted shape on a group with onto doubling); arbitrary
    quadrupled-coset sign data does not guarantee a solution and is refused.
    """
    if isinstance(form, PositiveSolutionForm):
        group = form.group
        fast = _synth_positive_fast(form, domain)
        if fast is not None:
            return fast
        fvals, gvals = {}, {}
        for p in domain.points(group):
            tf, tg = form.log_pair(p)
            fvals[p] = tf
            gvals[p] = tg
        return (FuncTable(group, domain, KIND_POSITIVE, fvals),
                FuncTable(group, domain, KIND_POSITIVE, gvals))
    if isinstance(form, HermitianSolutionForm):
        _require_sufficient(form)
        group = form.group
        fvals, gvals = {}, {}
        for p in domain.points(group):
            fa, gb = form.exact_pair(p)
            fvals[p] = fa
            gvals[p] = gb
        return (FuncTable(group, domain, KIND_COMPLEX, fvals),
                FuncTable(group, domain, KIND_COMPLEX, gvals))
    raise SynthesisError(f"cannot synthesize from {type(form).__name__}")


def _synth_positive_fast(form: PositiveSolutionForm, domain: Domain):
    """Array-backed synthesis of the exact log tables; None when unavailable."""
    from . import _vec

    info = _vec.domain_info(form.group, domain)
    if info is None:
        return None
    fa = _vec.form_log_arrays(form.P, form.l, form.r.entries, info)
    ga = _vec.form_log_arrays(form.P, form.m, form.r.negated().entries, info)
    if fa is None or ga is None:
        return None
    pts = domain.points(form.group)
    (fn, fd), (gn, gd) = fa, ga
    fvals = {p: Fraction(int(n), fd) for p, n in zip(pts, fn)}
    gvals = {p: Fraction(int(n), gd) for p, n in zip(pts, gn)}
    return (FuncTable(form.group, domain, KIND_POSITIVE, fvals),
            FuncTable(form.group, domain, KIND_POSITIVE, gvals))


def _require_sufficient(form: HermitianSolutionForm):
    if form.support is not None:
        group = form.group
        if not group.doubling_is_onto():
            raise SynthesisError(
                "support-restricted synthesis needs a group with X^(2) = X"
            )
        if form.support.quotient_has_order2():
            raise SynthesisError(
                "quotient by the support subgroup has an element of order 2"
            )
        if not (form.a.is_trivial() and form.b.is_trivial()):
            raise SynthesisError(
                "support-restricted synthesis uses trivial sign maps"
            )
        return
    if not (form.a.constant_on_doubled_cosets()
            and form.b.constant_on_doubled_cosets()):
        raise SynthesisError(
            "sign maps are not constant on cosets of X^(2); such forms "
            "do not synthesize to guaranteed solutions"
        )
    for idx, v in form.a.entries:
        if v * form.b.at(idx) != 1:
            raise SynthesisError(
                "sign maps must satisfy a(x)b(x) = 1 for guaranteed synthesis"
            )
