"""Exact sparse multivariate polynomials in the state variables and time.

A :class:`Poly` over ``n`` state variables stores a mapping from exponent
tuples of length ``n + 1`` to nonzero rational coefficients.  Slot ``n`` of
every exponent tuple is the exponent of the time variable ``t``.

Coefficients are kept as plain ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise; both are exact rationals and the
mixed storage avoids Fraction overhead on the (very common) integer case.
"""

from __future__ import annotations

from array import array
from fractions import Fraction
from itertools import chain
from numbers import Rational
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from .kernels import eval_packed

Exponent = Tuple[int, ...]
Coeff = Union[int, Fraction]
Scalar = Union[int, Fraction, str]


class PolyError(ValueError):
    """Raised on malformed polynomial operations (variable-count mismatch etc.)."""


class BadPrime(ArithmeticError):
    """A coefficient denominator vanishes modulo the chosen prime."""


def _norm(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_rational(value: Scalar) -> Coeff:
    """Parse an int, Fraction or rational string such as ``"-1/2"``."""
    if isinstance(value, bool):
        raise PolyError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Rational):
        return _norm(Fraction(value))
    if isinstance(value, str):
        try:
            return _norm(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise PolyError(f"not a rational: {value!r}") from exc
    raise PolyError(f"not a rational: {value!r}")


class Poly:
    """Immutable sparse polynomial in x_1..x_n and t."""

    __slots__ = ("terms", "nvars", "_hash", "_modcache")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar] | None = None):
        self.nvars = nvars
        clean: Dict[Exponent, Coeff] = {}
        if terms:
            width = nvars + 1
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != width or any(e < 0 for e in exp):
                    raise PolyError(f"bad exponent {exp} for nvars={nvars}")
                c = as_rational(c)
                if c:
                    clean[exp] = c
        self.terms = clean
        self._hash = None
        self._modcache = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, Coeff]) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        p._modcache = None
        return p

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, value: Scalar) -> "Poly":
        c = as_rational(value)
        return cls._raw(nvars, {(0,) * (nvars + 1): c} if c else {})

    @classmethod
    def var(cls, nvars: int, index: int) -> "Poly":
        """Variable with 0-based ``index``; ``index == nvars`` is t."""
        if not 0 <= index <= nvars:
            raise PolyError(f"variable index {index} out of range for nvars={nvars}")
        exp = [0] * (nvars + 1)
        exp[index] = 1
        return cls._raw(nvars, {tuple(exp): 1})

    @classmethod
    def t(cls, nvars: int) -> "Poly":
        return cls.var(nvars, nvars)

    @classmethod
    def time_poly(cls, nvars: int, coeffs: Mapping[int, Scalar]) -> "Poly":
        """Polynomial in t only, from a ``{power: coefficient}`` mapping."""
        terms: Dict[Exponent, Coeff] = {}
        pad = (0,) * nvars
        for power, c in coeffs.items():
            if power < 0:
                raise PolyError(f"negative power of t: {power}")
            c = as_rational(c)
            key = pad + (power,)
            c = _norm(terms.get(key, 0) + c)
            if c:
                terms[key] = c
            else:
                terms.pop(key, None)
        return cls._raw(nvars, terms)

    # predicates / queries ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def depends_on_state(self) -> bool:
        """True if any x variable (not t) appears."""
        n = self.nvars
        return any(any(e[:n]) for e in self.terms)

    def total_degree(self) -> int:
        """Maximum exponent sum over terms; -1 marks the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def x_degree(self) -> int:
        """Total degree in the state variables only (-1 for zero)."""
        if not self.terms:
            return -1
        n = self.nvars
        return max(sum(e[:n]) for e in self.terms)

    def is_x_homogeneous(self, degree: int) -> bool:
        n = self.nvars
        return all(sum(e[:n]) == degree for e in self.terms)

    def coeff(self, exp: Sequence[int]) -> Coeff:
        return self.terms.get(tuple(exp), 0)

    # arithmetic -------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise PolyError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = _norm(v + c)
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly._raw(self.nvars, {})
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponent, Coeff] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple([i + j for i, j in zip(ea, eb)])
                v = get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return Poly._raw(self.nvars, {e: _norm(c) for e, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        return self.__mul__(other)

    def scale(self, factor: Scalar) -> "Poly":
        c = as_rational(factor)
        if not c:
            return Poly._raw(self.nvars, {})
        if c == 1:
            return self
        return Poly._raw(self.nvars, {e: _norm(v * c) for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise PolyError("negative power")
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def partial(self, index: int) -> "Poly":
        """Exact partial derivative in variable ``index`` (0-based; nvars is t)."""
        if not 0 <= index <= self.nvars:
            raise PolyError(f"variable index {index} out of range for nvars={self.nvars}")
        out: Dict[Exponent, Coeff] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                out[e[:index] + (k - 1,) + e[index + 1:]] = c * k
        return Poly._raw(self.nvars, out)

    def dt(self) -> "Poly":
        return self.partial(self.nvars)

    def gradient(self) -> list["Poly"]:
        """Partials in x_1..x_n (t excluded)."""
        return [self.partial(i) for i in range(self.nvars)]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient ``self / other``; raises PolyError unless the division is exact."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_o = max(other.terms)
        lc_o = other.terms[lead_o]
        rem = dict(self.terms)
        quot: Dict[Exponent, Coeff] = {}
        while rem:
            lead_r = max(rem)
            diff = tuple(i - j for i, j in zip(lead_r, lead_o))
            if any(d < 0 for d in diff):
                raise PolyError("inexact polynomial division")
            c = _norm(Fraction(rem[lead_r]) / lc_o)
            quot[diff] = c
            for e, v in other.terms.items():
                k = tuple(i + j for i, j in zip(e, diff))
                w = _norm(rem.get(k, 0) - c * v)
                if w:
                    rem[k] = w
                else:
                    rem.pop(k, None)
        return Poly._raw(self.nvars, quot)

    # evaluation -------------------------------------------------------

    def _packed(self, prime: int):
        """Flattened exponents, coefficient residues and max exponent for ``prime``."""
        cache = self._modcache
        if cache is not None and cache[0] == prime:
            return cache[1]
        terms = self.terms
        exps = array("q", chain.from_iterable(terms))
        top = max(exps) if exps else 0
        res = array("Q")
        for c in terms.values():
            if type(c) is int:
                res.append(c % prime)
            else:
                den = c.denominator % prime
                if den == 0:
                    raise BadPrime(f"denominator {c.denominator} vanishes mod {prime}")
                res.append(c.numerator * pow(den, -1, prime) % prime)
        packed = (exps, res, top)
        self._modcache = (prime, packed)
        return packed

    def eval_mod(self, point: Sequence[int], prime: int) -> int:
        """Value at ``point`` (length nvars+1, t last) in the integers mod ``prime``."""
        if len(point) != self.nvars + 1:
            raise PolyError(f"point has length {len(point)}, expected {self.nvars + 1}")
        exps, res, top = self._packed(prime)
        table = PowerTable(point, prime)
        table.ensure(top)
        return eval_packed(exps, res, self.nvars + 1, table.powers, table.stride, prime)

    def evaluate(self, point: Sequence[Scalar]) -> Coeff:
        """Exact rational value at ``point`` (length nvars+1)."""
        if len(point) != self.nvars + 1:
            raise PolyError(f"point has length {len(point)}, expected {self.nvars + 1}")
        vals = [as_rational(v) for v in point]
        total: Coeff = 0
        for e, c in self.terms.items():
            v = c
            for xi, k in zip(vals, e):
                if k:
                    v = v * xi**k
            total = total + v
        return _norm(Fraction(total))

    # identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.terms == Poly.const(self.nvars, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = [f"x{i + 1}" for i in range(self.nvars)] + ["t"]
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def state_vector(nvars: int) -> list[Poly]:
    """The symbolic state (x_1, ..., x_n)."""
    return [Poly.var(nvars, i) for i in range(nvars)]


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    """Sum that merges all terms in one pass."""
    out: Dict[Exponent, Coeff] = {}
    for p in polys:
        for e, c in p.terms.items():
            out[e] = out.get(e, 0) + c
    return Poly._raw(nvars, {e: _norm(c) for e, c in out.items() if c})


def dot(a: Sequence[Poly], b: Sequence[Poly], nvars: int) -> Poly:
    """Sum of products a_i * b_i, accumulated term-wise."""
    out: Dict[Exponent, Coeff] = {}
    get = out.get
    for p, q in zip(a, b):
        if not p.terms or not q.terms:
            continue
        for eq, cq in q.terms.items():
            for ep, cp in p.terms.items():
                e = tuple([i + j for i, j in zip(ep, eq)])
                v = get(e)
                out[e] = cp * cq if v is None else v + cp * cq
    return Poly._raw(nvars, {e: _norm(c) for e, c in out.items() if c})


class PowerTable:
    """Powers of one evaluation point mod ``prime``, flattened with a fixed stride.

    ``powers[v * stride + k] == point[v] ** k % prime``; :meth:`ensure`
    regrows the table when a higher exponent is needed.
    """

    __slots__ = ("point", "prime", "stride", "powers")

    def __init__(self, point: Sequence[int], prime: int):
        self.point = [x % prime for x in point]
        self.prime = prime
        self.stride = 0
        self.powers = array("Q")

    def ensure(self, degree: int) -> None:
        if degree < self.stride:
            return
        stride = max(degree + 1, 2 * self.stride, 4)
        p = self.prime
        flat = array("Q")
        for x in self.point:
            v = 1
            for _ in range(stride):
                flat.append(v)
                v = v * x % p
        self.powers = flat
        self.stride = stride

    def __call__(self, poly: "Poly") -> int:
        if not poly.terms:
            return 0
        exps, res, top = poly._packed(self.prime)
        if top >= self.stride:
            self.ensure(top)
        return eval_packed(exps, res, poly.nvars + 1, self.powers, self.stride, self.prime)
