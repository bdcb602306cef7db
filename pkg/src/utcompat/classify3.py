"""Structures on UT_3(K): general forms, associators, automorphisms and normal forms.

Each of the three identity kinds with a complete n = 3 classification has a
general form parametrized by a lambda vector:

* ``IdForm8``      (id-matching, lambda_1..lambda_8)
* ``TwelveForm6``  ((12)-matching, lambda_1..lambda_6)
* ``InterForm6``   (interchangeable, lambda_1..lambda_6)

Automorphisms of (UT_3, .) are parametrized by ``(a11, a22, a31, a32)``::

    phi(e12) = a11 e12 + a31 e13
    phi(e23) = a22 e23 + a32 e13
    phi(e13) = a11 a22 e13

and act on products by ``a # b = phi(phi^-1(a) * phi^-1(b))``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

from .idspace import IdentityKind, residual
from .scalars import Field, PrimeField, Scalar
from .utalg import Element, LinearMap, Product, basis, pushforward

E12, E13, E23 = (1, 2), (1, 3), (2, 3)
UNITS = (E12, E13, E23)
TRIPLES = tuple(itertools.product(UNITS, repeat=3))

# (a, b) -> list of (lambda index, output unit)
_FORM_TABLES = {
    "IdForm8": {
        (E12, E12): [(1, E12), (5, E13)],
        (E12, E13): [(1, E13)],
        (E12, E23): [(2, E13)],
        (E13, E12): [(6, E13)],
        (E13, E23): [(7, E13)],
        (E23, E12): [(3, E12), (6, E23), (8, E13)],
        (E23, E13): [(3, E13)],
        (E23, E23): [(4, E13), (7, E23)],
    },
    "TwelveForm6": {
        (E12, E12): [(5, E12), (1, E13)],
        (E12, E23): [(6, E12), (2, E13), (5, E23)],
        (E23, E12): [(3, E13)],
        (E23, E23): [(4, E13), (6, E23)],
    },
    "InterForm6": {
        (E12, E12): [(1, E13)],
        (E12, E23): [(6, E12), (2, E13), (5, E23)],
        (E23, E12): [(3, E13)],
        (E12, E13): [(5, E13)],
        (E13, E23): [(6, E13)],
        (E23, E23): [(4, E13)],
    },
}

FORM_LENGTH = {"IdForm8": 8, "TwelveForm6": 6, "InterForm6": 6}

FORM_OF_KIND = {
    IdentityKind.MATCH_ID: "IdForm8",
    IdentityKind.MATCH_TWELVE: "TwelveForm6",
    IdentityKind.INTERCHANGEABLE: "InterForm6",
}
KIND_OF_FORM = {v: k for k, v in FORM_OF_KIND.items()}

CASE_COUNT = {IdentityKind.MATCH_ID: 8, IdentityKind.MATCH_TWELVE: 5,
              IdentityKind.INTERCHANGEABLE: 3}

PARAM_COUNT = {
    IdentityKind.MATCH_ID: {1: 0, 2: 0, 3: 0, 4: 3, 5: 0, 6: 0, 7: 2, 8: 2},
    IdentityKind.MATCH_TWELVE: {1: 0, 2: 0, 3: 3, 4: 2, 5: 2},
    IdentityKind.INTERCHANGEABLE: {1: 3, 2: 2, 3: 2},
}


class ClassificationError(ValueError):
    """Input outside the domain of an n = 3 operation."""


class NonAssociativeError(ClassificationError):
    pass


def _check_form(form: str) -> str:
    if form not in FORM_LENGTH:
        raise ValueError(f"unknown general form {form!r}; expected one of {sorted(FORM_LENGTH)}")
    return form


@dataclass(frozen=True)
class LambdaVector:
    form: str
    field: Field
    values: tuple

    def __post_init__(self):
        _check_form(self.form)
        vals = tuple(self.field(v) for v in self.values)
        if len(vals) != FORM_LENGTH[self.form]:
            raise ValueError(f"{self.form} takes {FORM_LENGTH[self.form]} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, form: str, field: Field) -> LambdaVector:
        return cls(form, field, (0,) * FORM_LENGTH[_check_form(form)])

    @classmethod
    def of(cls, form: str, field: Field, **lams) -> LambdaVector:
        """Build from keyword arguments ``l1=..., l5=...``; others are zero."""
        vals = [0] * FORM_LENGTH[_check_form(form)]
        for key, v in lams.items():
            k = int(key.lstrip("l"))
            if not 1 <= k <= len(vals):
                raise ValueError(f"{form} has no lambda_{k}")
            vals[k - 1] = v
        return cls(form, field, tuple(vals))

    @property
    def kind(self) -> IdentityKind:
        return KIND_OF_FORM[self.form]

    def __getitem__(self, k: int):
        """1-based access, matching lambda_k."""
        if not 1 <= k <= len(self.values):
            raise IndexError(k)
        return self.values[k - 1]

    @property
    def scalars(self) -> tuple:
        return tuple(Scalar(self.field, v) for v in self.values)

    def to_json(self) -> dict:
        return {"form": self.form, "field": self.field.name,
                "values": [self.field.format(v) for v in self.values]}


def lambda_to_product(v: LambdaVector) -> Product:
    F = v.field
    table: dict = {}
    for (a, b), terms in _FORM_TABLES[v.form].items():
        out = {}
        for k, s in terms:
            x = v[k]
            if x:
                out[s] = F.add(out.get(s, F.zero), x)
        out = {s: x for s, x in out.items() if x}
        if out:
            table[(a, b)] = out
    return Product(3, F, table)


def _fmt_entry(F, a, b, s, x):
    return f"e{a[0]}{a[1]}*e{b[0]}{b[1]} has coefficient {F.format(x)} at e{s[0]}{s[1]}"


def product_to_lambda(P: Product, form: str) -> LambdaVector:
    """Read the lambda vector of P, rejecting P outside the general form.

    The error names the first table entry (in basis order) where P and the
    form built from the read-off values disagree.
    """
    _check_form(form)
    if P.n != 3:
        raise ClassificationError(f"general forms live on UT_3, got UT_{P.n}")
    F = P.field
    vals = [None] * FORM_LENGTH[form]
    for (a, b), terms in _FORM_TABLES[form].items():
        for k, s in terms:
            if vals[k - 1] is None:
                vals[k - 1] = P.get(a, b).get(s, F.zero)
    v = LambdaVector(form, F, tuple(F.zero if x is None else x for x in vals))
    Q = lambda_to_product(v)
    if Q != P:
        for a in UNITS:
            for b in UNITS:
                got, want = P.get(a, b), Q.get(a, b)
                for s in UNITS:
                    x, y = got.get(s, F.zero), want.get(s, F.zero)
                    if x != y:
                        raise ClassificationError(
                            f"product is not of {form} shape: {_fmt_entry(F, a, b, s, x)}, "
                            f"expected {F.format(y)}")
    return v


# Closed-form associators [a, b, c] = (a*b)*c - a*(b*c) on basis triples.
# Each entry maps a triple to {output unit: polynomial in lambda}.

def _id_assoc(l):
    return {
        (E12, E12, E12): {E13: l[5] * (l[6] - l[1])},
        (E12, E12, E23): {E13: l[5] * l[7]},
        (E12, E23, E12): {E12: -l[1] * l[3], E13: -(l[1] * l[8] + l[5] * l[3])},
        (E12, E23, E23): {E13: -l[1] * l[4]},
        (E12, E23, E13): {E13: -l[1] * l[3]},
        (E23, E12, E12): {E12: l[6] * l[3], E23: l[6] * (l[6] - l[1]),
                          E13: l[8] * (2 * l[6] - l[1])},
        (E23, E12, E23): {E23: l[7] * l[6], E13: l[7] * l[8] + l[6] * l[4]},
        (E23, E12, E13): {E13: l[6] * l[3]},
        (E13, E23, E12): {E13: -l[6] * l[3]},
        (E23, E23, E12): {E12: l[3] * (l[7] - l[3]), E23: -l[6] * l[3],
                          E13: l[8] * (l[7] - 2 * l[3])},
        (E23, E23, E23): {E13: l[4] * (l[7] - l[3])},
        (E23, E23, E13): {E13: l[3] * (l[7] - l[3])},
        (E13, E12, E12): {E13: l[6] * (l[6] - l[1])},
        (E13, E12, E23): {E13: l[7] * l[6]},
    }


def _twelve_assoc(l):
    return {
        (E12, E12, E23): {E12: -l[5] * l[6], E13: -l[1] * l[6]},
        (E12, E23, E12): {E12: l[5] * l[6], E13: l[1] * l[6] + l[3] * l[5]},
        (E12, E23, E23): {E13: l[4] * l[5], E23: l[5] * l[6]},
        (E23, E12, E12): {E13: -l[3] * l[5]},
        (E23, E12, E23): {E13: -(l[3] * l[6] + l[4] * l[5]), E23: -l[5] * l[6]},
        (E23, E23, E12): {E13: l[3] * l[6]},
    }


def _inter_assoc(l):
    return {
        (E12, E12, E12): {E13: -l[1] * l[5]},
        (E12, E12, E23): {E12: -l[5] * l[6], E23: -l[5] * l[5], E13: -2 * l[2] * l[5]},
        (E12, E12, E13): {E13: -l[5] * l[5]},
        (E12, E23, E12): {E13: l[1] * l[6]},
        (E12, E23, E23): {E12: l[6] * l[6], E23: l[5] * l[6], E13: 2 * l[2] * l[6]},
        (E12, E23, E13): {E13: l[5] * l[6]},
        (E23, E12, E23): {E13: -l[4] * l[5]},
        (E23, E23, E23): {E13: l[4] * l[6]},
        (E13, E12, E23): {E13: -l[5] * l[6]},
        (E13, E23, E23): {E13: l[6] * l[6]},
    }


_ASSOC = {"IdForm8": _id_assoc, "TwelveForm6": _twelve_assoc, "InterForm6": _inter_assoc}


def _raw_associators(form: str, field: Field, values) -> dict:
    l = (None,) + tuple(values)
    out = {}
    for t, coeffs in _ASSOC[form](l).items():
        c = {s: field(x) for s, x in coeffs.items()}
        out[t] = {s: x for s, x in sorted(c.items()) if x}
    return out


def closed_form_associators(v: LambdaVector) -> dict:
    """All 27 basis triples mapped to their associator, from the closed formulas.

    Triples the formulas do not list map to zero.
    """
    listed = _raw_associators(v.form, v.field, v.values)
    return {t: Element(3, v.field, listed.get(t, {})) for t in TRIPLES}


def first_nonzero_associator(v: LambdaVector):
    """(triple, Element) for the first listed nonzero associator, or None."""
    for t, c in _raw_associators(v.form, v.field, v.values).items():
        if c:
            return t, Element(3, v.field, c)
    return None


def is_associative_lambda(v: LambdaVector) -> bool:
    return first_nonzero_associator(v) is None


@dataclass(frozen=True)
class Aut3Params:
    field: Field
    a11: object
    a22: object
    a31: object = 0
    a32: object = 0

    def __post_init__(self):
        F = self.field
        for name in ("a11", "a22", "a31", "a32"):
            object.__setattr__(self, name, F(getattr(self, name)))
        if not self.a11 or not self.a22:
            raise ValueError("automorphism parameters a11 and a22 must be nonzero")

    @classmethod
    def identity(cls, field: Field) -> Aut3Params:
        return cls(field, 1, 1, 0, 0)

    def as_tuple(self) -> tuple:
        return (self.a11, self.a22, self.a31, self.a32)

    def to_json(self) -> dict:
        f = self.field.format
        return {"a11": f(self.a11), "a22": f(self.a22), "a31": f(self.a31), "a32": f(self.a32)}


def aut3_map(p: Aut3Params) -> LinearMap:
    """The automorphism as a LinearMap on UT_3 (columns in basis order e12, e13, e23)."""
    F = p.field
    images = {
        E12: Element(3, F, {E12: p.a11, E13: p.a31}),
        E23: Element(3, F, {E23: p.a22, E13: p.a32}),
        E13: Element(3, F, {E13: F.mul(p.a11, p.a22)}),
    }
    return LinearMap.from_images(3, F, images)


class TransformMismatch(AssertionError):
    pass


def _id_transform(F, l, p):
    a11, a22, a31, a32 = p.as_tuple()
    i1, i2 = F.inv(a11), F.inv(a22)
    d = a11 * a22
    new = [None] * 9
    new[1] = i1 * l[1]
    new[5] = i1 * i1 * (d * l[5] - a31 * l[6])
    new[7] = i2 * l[7]
    new[4] = i2 * i2 * (d * l[4] - a32 * l[3])
    new[2] = i1 * i2 * (d * l[2] - a32 * l[1] - a31 * l[7])
    new[3] = i2 * l[3]
    new[6] = i1 * l[6]
    new[8] = l[8]
    return new[1:]


def _twelve_transform(F, l, p):
    a11, a22, a31, a32 = p.as_tuple()
    i1, i2 = F.inv(a11), F.inv(a22)
    d = a11 * a22
    new = [None] * 7
    new[5] = i1 * l[5]
    new[1] = i1 * i1 * (d * l[1] + a31 * l[5])
    new[6] = i2 * l[6]
    new[2] = i1 * i2 * (d * l[2] + a32 * l[5] + a31 * l[6])
    new[3] = l[3]
    new[4] = i2 * i2 * (d * l[4] + a32 * l[6])
    return new[1:]


_TRANSFORMS = {"IdForm8": _id_transform, "TwelveForm6": _twelve_transform}


def transform_by_pushforward(v: LambdaVector, p: Aut3Params) -> LambdaVector:
    _same_field(v, p)
    return product_to_lambda(pushforward(lambda_to_product(v), aut3_map(p)), v.form)


def _same_field(v, p):
    if v.field != p.field:
        raise ValueError(f"lambda vector over {v.field} but automorphism over {p.field}")


def transform_lambda(v: LambdaVector, p: Aut3Params, verify: bool = False) -> LambdaVector:
    """The lambda vector of the product transported along the automorphism ``p``.

    IdForm8 and TwelveForm6 use closed formulas; InterForm6 goes through the
    generic pushforward.  With ``verify=True`` the closed formula is checked
    against the pushforward route.
    """
    _same_field(v, p)
    closed = _TRANSFORMS.get(v.form)
    if closed is None:
        return transform_by_pushforward(v, p)
    F = v.field
    out = LambdaVector(v.form, F, tuple(F(x) for x in closed(F, (None,) + v.values, p)))
    if verify:
        ref = transform_by_pushforward(v, p)
        if ref != out:
            raise TransformMismatch(f"closed form {out.values} != pushforward {ref.values}")
    return out


@dataclass(frozen=True)
class CanonicalClass:
    kind: IdentityKind
    case: int
    params: tuple = ()
    field: Field = dc_field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in CASE_COUNT:
            raise ValueError(f"no UT_3 classification for {self.kind.label}")
        if not 1 <= self.case <= CASE_COUNT[self.kind]:
            raise ValueError(f"{self.kind.label} has cases 1..{CASE_COUNT[self.kind]}")
        want = PARAM_COUNT[self.kind][self.case]
        if len(self.params) != want:
            raise ValueError(f"{self.kind.label} case {self.case} carries {want} parameters")
        if self.field is not None:
            object.__setattr__(self, "params", tuple(self.field(x) for x in self.params))

    def label(self) -> str:
        fmt = self.field.format if self.field is not None else str
        ps = ",".join(fmt(x) for x in self.params)
        return f"{self.kind.label}:{self.case}" + (f"({ps})" if self.params else "")

    def to_json(self) -> dict:
        fmt = self.field.format if self.field is not None else str
        return {"kind": self.kind.label, "case": self.case,
                "params": [fmt(x) for x in self.params]}


def _kind_of(kind_or_form) -> IdentityKind:
    if isinstance(kind_or_form, IdentityKind):
        if kind_or_form not in FORM_OF_KIND:
            raise ValueError(f"no UT_3 classification for {kind_or_form.label}")
        return kind_or_form
    return KIND_OF_FORM[_check_form(kind_or_form)]


def representative(c: CanonicalClass, field: Field) -> LambdaVector:
    """The normal-form lambda vector of a canonical class."""
    form = FORM_OF_KIND[c.kind]
    case, ps = c.case, c.params
    if c.kind is IdentityKind.MATCH_ID:
        lams = {
            1: dict(l3=1, l7=1),
            2: dict(l1=1, l7=1),
            3: dict(l7=1),
            4: lambda: dict(l4=1, l5=ps[0], l2=ps[1], l8=ps[2]),
            5: dict(l1=1, l6=1),
            6: dict(l1=1),
            7: lambda: dict(l5=1, l2=ps[0], l8=ps[1]),
            8: lambda: dict(l2=ps[0], l8=ps[1]),
        }[case]
    else:
        if c.kind is IdentityKind.MATCH_TWELVE:
            if case == 1:
                return LambdaVector.of(form, field, l5=1)
            if case == 2:
                return LambdaVector.of(form, field, l6=1)
            case -= 2
        lams = {
            1: lambda: dict(l4=1, l1=ps[0], l2=ps[1], l3=ps[2]),
            2: lambda: dict(l1=1, l2=ps[0], l3=ps[1]),
            3: lambda: dict(l2=ps[0], l3=ps[1]),
        }[case]
    if callable(lams):
        lams = lams()
    return LambdaVector.of(form, field, **lams)


def _id_canonical(v: LambdaVector):
    F, l = v.field, (None,) + v.values
    one, zero = F.one, F.zero
    if l[3]:
        return 1, (), (one, l[3], l[2], l[4])
    if l[7]:
        if l[1]:
            return 2, (), (l[1], l[7], F.mul(l[1], l[2]), zero)
        return 3, (), (one, l[7], l[2], zero)
    if l[4]:
        return 4, (F.mul(l[4], l[5]), l[2], l[8]), (one, l[4], zero, zero)
    if l[6]:
        return 5, (), (l[6], one, l[5], l[2])
    if l[1]:
        return 6, (), (l[1], one, zero, l[2])
    if l[5]:
        return 7, (l[2], l[8]), (l[5], one, zero, zero)
    return 8, (l[2], l[8]), (one, one, zero, zero)


def _diagonal_cases(F, l):
    """Normal forms of products with values in span{e13} (lambda_5 = lambda_6 = 0)."""
    one, zero = F.one, F.zero
    if l[4]:
        return 1, (F.mul(l[1], l[4]), l[2], l[3]), (one, l[4], zero, zero)
    if l[1]:
        return 2, (l[2], l[3]), (l[1], one, zero, zero)
    return 3, (l[2], l[3]), (one, one, zero, zero)


def _twelve_canonical(v: LambdaVector):
    F, l = v.field, (None,) + v.values
    one = F.one
    if l[5]:
        return 1, (), (l[5], one, F.neg(l[1]), F.neg(l[2]))
    if l[6]:
        return 2, (), (one, l[6], F.neg(l[2]), F.neg(l[4]))
    case, params, wit = _diagonal_cases(F, l)
    return case + 2, params, wit


def _inter_canonical(v: LambdaVector):
    return _diagonal_cases(v.field, (None,) + v.values)


_CANON = {"IdForm8": _id_canonical, "TwelveForm6": _twelve_canonical,
          "InterForm6": _inter_canonical}


def canonical_form(v: LambdaVector) -> tuple[CanonicalClass, Aut3Params]:
    """Normal form of an associative structure and an automorphism reaching it.

    ``transform_lambda(v, witness) == representative(class)`` holds for the
    returned pair.
    """
    bad = first_nonzero_associator(v)
    if bad is not None:
        (a, b, c), val = bad
        names = ", ".join(f"e{x[0]}{x[1]}" for x in (a, b, c))
        raise NonAssociativeError(f"structure is not associative: [{names}] = {val!r}")
    case, params, wit = _CANON[v.form](v)
    cls = CanonicalClass(v.kind, case, tuple(params), v.field)
    return cls, Aut3Params(v.field, *wit)


def sample_associative(kind: IdentityKind, case: int, field: Field,
                       rng: random.Random, bound: int = 5) -> LambdaVector:
    """A random associative lambda vector falling into the given case.

    Free parameters are drawn at random; the values the case forces are set
    directly, so every case is hit with equal probability.
    """
    kind = _kind_of(kind)
    form = FORM_OF_KIND[kind]
    r = lambda: field.random(rng, bound)  # noqa: E731
    nz = lambda: field.random_nonzero(rng, bound)  # noqa: E731
    if kind is IdentityKind.MATCH_ID:
        if case == 1:
            t = nz()
            lams = dict(l3=t, l7=t, l2=r(), l4=r())
        elif case == 2:
            lams = dict(l7=nz(), l1=nz(), l2=r())
        elif case == 3:
            lams = dict(l7=nz(), l2=r())
        elif case == 4:
            lams = dict(l4=nz(), l5=r(), l2=r(), l8=r())
        elif case == 5:
            t = nz()
            lams = dict(l6=t, l1=t, l5=r(), l2=r())
        elif case == 6:
            lams = dict(l1=nz(), l2=r())
        elif case == 7:
            lams = dict(l5=nz(), l2=r(), l8=r())
        elif case == 8:
            lams = dict(l2=r(), l8=r())
        else:
            raise ValueError(f"MatchId has cases 1..8, got {case}")
        return LambdaVector.of(form, field, **lams)
    if kind is IdentityKind.MATCH_TWELVE:
        if case == 1:
            return LambdaVector.of(form, field, l5=nz(), l1=r(), l2=r())
        if case == 2:
            return LambdaVector.of(form, field, l6=nz(), l2=r(), l4=r())
        if not 3 <= case <= 5:
            raise ValueError(f"MatchTwelve has cases 1..5, got {case}")
        case -= 2
    elif not 1 <= case <= 3:
        raise ValueError(f"Interchangeable has cases 1..3, got {case}")
    if case == 1:
        lams = dict(l4=nz(), l1=r(), l2=r(), l3=r())
    elif case == 2:
        lams = dict(l1=nz(), l2=r(), l3=r())
    else:
        lams = dict(l2=r(), l3=r())
    return LambdaVector.of(form, field, **lams)


def automorphisms(field: PrimeField):
    """Every Aut3Params over a prime field, in a fixed order."""
    q = field.p
    for a11 in range(1, q):
        for a22 in range(1, q):
            for a31 in range(q):
                for a32 in range(q):
                    yield Aut3Params(field, a11, a22, a31, a32)


def random_automorphism(field: Field, rng: random.Random, bound: int = 5) -> Aut3Params:
    return Aut3Params(field, field.random_nonzero(rng, bound), field.random_nonzero(rng, bound),
                      field.random(rng, bound), field.random(rng, bound))


CENSUS_PRIMES = (2, 3, 5)


class CensusRow(NamedTuple):
    label: CanonicalClass
    orbit_size: int


@dataclass
class CensusResult:
    kind: IdentityKind
    q: int
    total: int
    associative: int
    rows: list
    problems: list

    @property
    def orbits(self) -> int:
        return len(self.rows)

    @property
    def consistent(self) -> bool:
        """One label per orbit and distinct labels across orbits."""
        return not self.problems

    def to_json(self) -> dict:
        return {
            "kind": self.kind.label, "q": self.q, "total": self.total,
            "associative": self.associative, "orbits": self.orbits,
            "consistent": self.consistent, "problems": list(self.problems),
            "rows": [dict(r.label.to_json(), orbit_size=r.orbit_size) for r in self.rows],
        }

    def csv_rows(self) -> list:
        out = []
        for r in self.rows:
            fmt = r.label.field.format
            out.append([self.kind.label, self.q, r.label.case,
                        " ".join(fmt(x) for x in r.label.params), r.orbit_size])
        return out


def orbit_census(kind: IdentityKind, q: int) -> CensusResult:
    """Exhaustive orbit decomposition of the associative structures over F_q.

    Every lambda vector is enumerated and filtered by the closed-form
    associators; orbits are generated by applying all automorphisms and then
    labelled with :func:`canonical_form`.  Disagreements between orbits and
    labels are collected in ``problems`` rather than raised.
    """
    kind = _kind_of(kind)
    if q not in CENSUS_PRIMES:
        raise ValueError(f"orbit census supports q in {CENSUS_PRIMES}, got {q}")
    F = PrimeField(q)
    form = FORM_OF_KIND[kind]
    length = FORM_LENGTH[form]
    assoc = _ASSOC[form]
    survivors = []
    total = 0
    for vals in itertools.product(range(q), repeat=length):
        total += 1
        l = (None,) + vals
        if all(x % q == 0 for c in assoc(l).values() for x in c.values()):
            survivors.append(LambdaVector(form, F, vals))
    group = list(automorphisms(F))
    members = set(survivors)
    seen: set = set()
    rows = []
    problems = []
    label_orbit: dict = {}
    for v in survivors:
        if v in seen:
            continue
        orbit = {transform_lambda(v, g) for g in group}
        label, _ = canonical_form(v)
        for w in sorted(orbit, key=lambda x: x.values):
            if w not in members:
                problems.append(f"{w.values} is in the orbit of {v.values} but not associative")
                continue
            wl, _ = canonical_form(w)
            if wl != label:
                problems.append(f"orbit of {v.values} carries labels {label.label()} and {wl.label()}")
        if label in label_orbit:
            problems.append(f"label {label.label()} names two orbits "
                            f"({label_orbit[label]} and {v.values})")
        label_orbit[label] = v.values
        seen |= orbit
        rows.append(CensusRow(label, len(orbit)))
    rows.sort(key=lambda r: (r.label.case, r.label.params))
    return CensusResult(kind, q, total, len(survivors), rows, problems)


def totally_compatible_check(v: LambdaVector) -> bool:
    """True when the product of ``v`` satisfies the totally compatible identity."""
    return residual(IdentityKind.TOTALLY_COMPATIBLE, lambda_to_product(v)).holds


__all__ = [
    "LambdaVector", "lambda_to_product", "product_to_lambda", "closed_form_associators",
    "first_nonzero_associator", "is_associative_lambda", "Aut3Params", "aut3_map",
    "transform_lambda", "transform_by_pushforward", "TransformMismatch", "CanonicalClass",
    "canonical_form", "representative", "sample_associative", "automorphisms",
    "random_automorphism", "orbit_census", "CensusResult", "CensusRow", "ClassificationError",
    "NonAssociativeError", "FORM_OF_KIND", "KIND_OF_FORM", "FORM_LENGTH", "TRIPLES",
    "totally_compatible_check", "basis",
]
