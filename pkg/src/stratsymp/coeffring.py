"""Exact coefficient rings.

Three pieces live here:

* :class:`Poly`, multivariate polynomials over the rationals,
* :class:`AlgebraPresentation`, a polynomial algebra modulo principal
  relations such as ``w^2 - u*v`` together with :func:`poly_reduce`,
* :class:`SmoothExpr`, expression trees for the fragment of a germ-defined
  C-infinity ring used by the bump-function and partition-of-unity code.

Coefficients are :class:`fractions.Fraction`; nothing here ever rounds.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import (
    GuardViolated,
    InvalidPresentation,
    NonpositiveBound,
    ParseError,
    UnknownVariable,
)

Exponent = tuple[int, ...]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and rational strings like ``"3/2"`` exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {value!r} as an exact rational")


class Poly:
    """A polynomial with rational coefficients in an ordered list of variables.

    ``terms`` maps exponent vectors to nonzero coefficients.  Arithmetic
    between polynomials over different variable lists works on the union of
    the lists (left operand's order first).
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        nvars = len(self.variables)
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not match {nvars} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = as_fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, 0) + coeff
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "Poly":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, value, variables: Sequence[str] = ()) -> "Poly":
        variables = tuple(variables)
        value = as_fraction(value)
        terms = {(0,) * len(variables): value} if value else {}
        return cls._raw(variables, terms)

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "Poly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "Poly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise UnknownVariable(f"{name!r} is not one of {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Exponent, coeff=1) -> "Poly":
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "Poly":
        return parse_poly(text, variables)

    # basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def used_variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            used.update(v for v, e in zip(self.variables, exps) if e)
        return used

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.variables.index(n) for n in names if n in self.variables]
        return max((sum(exps[i] for i in idx) for exps in self.terms), default=-1)

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly._raw(self.variables, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def coefficient(self, exps: Exponent) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    # variable handling ----------------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> "Poly":
        """Re-express over ``variables``, which must contain every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = self.used_variables() - set(variables)
        if missing:
            raise UnknownVariable(f"variables {sorted(missing)} not in {variables}")
        pos = {v: i for i, v in enumerate(variables)}
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for v, e in zip(self.variables, exps):
                if e:
                    new[pos[v]] = e
            terms[tuple(new)] = c
        return Poly._raw(variables, terms)

    def _aligned(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if self.variables == other.variables:
            return self, other
        extra = [v for v in other.variables if v not in self.variables]
        union = self.variables + tuple(extra)
        return self.with_variables(union), other.with_variables(union)

    @staticmethod
    def _coerce(value, variables) -> "Poly":
        if isinstance(value, Poly):
            return value
        return Poly.constant(value, variables)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other, self.variables)
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly._raw(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other, self.variables))

    def __rsub__(self, other):
        return self._coerce(other, self.variables) + (-self)

    def scale(self, factor) -> "Poly":
        factor = as_fraction(factor)
        if not factor:
            return Poly._raw(self.variables, {})
        return Poly._raw(self.variables, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self._aligned(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Poly._raw(a.variables, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        other = as_fraction(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(1 / other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.constant(other, self.variables)
            except TypeError:
                return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            items = []
            for exps, c in self.terms.items():
                mono = tuple(sorted((v, e) for v, e in zip(self.variables, exps) if e))
                items.append((mono, c))
            self._hash = hash(frozenset(items))
        return self._hash

    # calculus and evaluation ---------------------------------------------
    def partial(self, var: str) -> "Poly":
        return poly_partial(self, var)

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate at ``point``; exact if all values are rational, else float."""
        total = 0
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(self.variables, exps):
                if e:
                    if v not in point:
                        raise UnknownVariable(f"no value for variable {v!r}")
                    term = term * point[v] ** e
            total = total + term
        return total

    def substitute(self, values: Mapping[str, "Poly"]) -> "Poly":
        """Substitute polynomials for variables (variables not listed stay)."""
        result = Poly.zero(())
        cache: dict = {}
        for exps, c in self.terms.items():
            term = Poly.constant(c)
            for v, e in zip(self.variables, exps):
                if not e:
                    continue
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = values[v] ** e
                    term = term * cache[key]
                else:
                    term = term * Poly.var(v) ** e
            result = result + term
        return result

    def compile(self, variables: Sequence[str]):
        """Return a float function of a tuple ordered like ``variables``."""
        p = self.with_variables(tuple(variables))
        terms = [(float(c), [(i, e) for i, e in enumerate(exps) if e]) for exps, c in p.terms.items()]

        def f(x):
            s = 0.0
            for c, factors in terms:
                t = c
                for i, e in factors:
                    t *= x[i] ** e if e > 1 else x[i]
                s += t
            return s

        return f

    # text ---------------------------------------------------------------
    def sorted_terms(self, priority: Sequence[str] | None = None):
        key = monomial_key(self.variables, priority)
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, variables={self.variables})"


def monomial_key(variables: Sequence[str], priority: Sequence[str] | None = None):
    """Graded-lex sort key; ``priority`` reorders which variable is compared first."""
    variables = tuple(variables)
    if priority is None:
        idx = list(range(len(variables)))
    else:
        idx = [variables.index(v) for v in priority if v in variables]
        idx += [i for i in range(len(variables)) if i not in idx]

    def key(exps):
        return (sum(exps), tuple(exps[i] for i in idx))

    return key


def poly_partial(p: Poly, var: str) -> Poly:
    """Formal partial derivative of ``p`` with respect to ``var``."""
    if var not in p.variables:
        raise UnknownVariable(f"{var!r} is not a variable of {p.variables}")
    i = p.variables.index(var)
    terms = {}
    for exps, c in p.terms.items():
        e = exps[i]
        if e:
            new = exps[:i] + (e - 1,) + exps[i + 1 :]
            terms[new] = c * e
    return Poly._raw(p.variables, terms)


# --------------------------------------------------------------------------
# literal parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize {text[pos:]!r}")
        num, ident, sym = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r} in {text!r}")
            tokens.append(("sym", sym))
        pos = m.end()
    return tokens


class _PolyParser:
    def __init__(self, text: str, variables: Sequence[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.fixed = variables is not None
        self.variables = list(variables or [])

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, sym):
        kind, val = self.take()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r} in {self.text!r}")

    def parse(self) -> Poly:
        if not self.tokens:
            raise ParseError("empty polynomial literal")
        p = self.expression()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return p.with_variables(tuple(self.variables))

    def expression(self) -> Poly:
        result = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            _, op = self.take()
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> Poly:
        sign = 1
        while self.peek() in (("sym", "+"), ("sym", "-")):
            _, op = self.take()
            if op == "-":
                sign = -sign
        result = self.factor()
        while self.peek() in (("sym", "*"), ("sym", "/")):
            _, op = self.take()
            f = self.factor()
            if op == "*":
                result = result * f
            else:
                if not f.is_constant() or f.is_zero():
                    raise ParseError(f"can only divide by a nonzero rational in {self.text!r}")
                result = result / f.constant_term()
        return result.scale(sign)

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            return base**val
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly.constant(val)
        if kind == "id":
            if val not in self.variables:
                if self.fixed:
                    raise UnknownVariable(f"{val!r} is not one of {tuple(self.variables)}")
                self.variables.append(val)
            return Poly.var(val)
        if (kind, val) == ("sym", "("):
            p = self.expression()
            self.expect(")")
            return p
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, variables: Sequence[str] | None = None) -> Poly:
    """Parse a literal such as ``"3/2*u^2*w - v"``.

    With ``variables`` given, the result lives over exactly those names and
    any other identifier raises :class:`UnknownVariable`; otherwise variables
    are ordered by first appearance.
    """
    return _PolyParser(text, variables).parse()


# --------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class AlgebraPresentation:
    """Polynomial algebra on ``generators`` modulo principal ``relations``.

    ``monomial_order`` is ``("grlex", priority)`` where ``priority`` lists the
    generators from most to least significant.  Each shipped presentation has
    a single relation, so division by it yields unique normal forms.
    """

    generators: tuple[str, ...]
    relations: tuple[Poly, ...] = ()
    weights: tuple[int, ...] | None = None
    monomial_order: tuple = ("grlex", None)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise InvalidPresentation(f"duplicate generators {gens}")
        if self.weights is None:
            object.__setattr__(self, "weights", (1,) * len(gens))
        elif len(self.weights) != len(gens):
            raise InvalidPresentation("one weight per generator required")
        kind, priority = self.monomial_order
        if kind != "grlex":
            raise InvalidPresentation(f"unsupported monomial order {kind!r}")
        priority = tuple(priority) if priority is not None else gens
        if sorted(priority) != sorted(gens):
            raise InvalidPresentation("monomial order priority must list every generator")
        object.__setattr__(self, "monomial_order", (kind, priority))
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                r = parse_poly(r, gens)
            if r.is_zero():
                raise InvalidPresentation("zero relation")
            rels.append(r.with_variables(gens))
        object.__setattr__(self, "relations", tuple(rels))

    @property
    def key(self):
        return monomial_key(self.generators, self.monomial_order[1])

    def leading(self, p: Poly):
        key = self.key
        exps = max(p.terms, key=key)
        return exps, p.terms[exps]

    def poly(self, text: str) -> Poly:
        return parse_poly(text, self.generators)

    def gen(self, name: str) -> Poly:
        return Poly.var(name, self.generators)

    def reduce(self, p: Poly) -> Poly:
        return poly_reduce(p, self)


def poly_reduce(p: Poly, pres: AlgebraPresentation) -> Poly:
    """Normal form of ``p`` modulo ``pres.relations`` by leading-term division."""
    unknown = p.used_variables() - set(pres.generators)
    if unknown:
        raise UnknownVariable(f"{sorted(unknown)} are not generators of the presentation")
    p = p.with_variables(pres.generators)
    if not pres.relations:
        return p
    key = pres.key
    leads = [pres.leading(r) + (r,) for r in pres.relations]
    work = dict(p.terms)
    remainder = {}
    while work:
        exps = max(work, key=key)
        coeff = work[exps]
        for lexps, lcoeff, rel in leads:
            if all(a >= b for a, b in zip(exps, lexps)):
                shift = tuple(a - b for a, b in zip(exps, lexps))
                factor = coeff / lcoeff
                for rexps, rcoeff in rel.terms.items():
                    e = tuple(a + b for a, b in zip(rexps, shift))
                    s = work.get(e, 0) - factor * rcoeff
                    if s:
                        work[e] = s
                    else:
                        work.pop(e, None)
                break
        else:
            remainder[exps] = coeff
            del work[exps]
    return Poly._raw(pres.generators, remainder)


# --------------------------------------------------------------------------
# smooth expressions

SMOOTH_TAGS = ("exp", "smooth_step", "normalized_step", "guarded_reciprocal")


class SmoothExpr:
    """Base class of expression trees closed under sums, products and composition."""

    def __add__(self, other):
        return Sum((self, as_expr(other)))

    def __radd__(self, other):
        return Sum((as_expr(other), self))

    def __mul__(self, other):
        return Prod((self, as_expr(other)))

    def __rmul__(self, other):
        return Prod((as_expr(other), self))

    def __neg__(self):
        return Prod((Const(Fraction(-1)), self))

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) + (-self)

    def evaluate(self, point: Mapping[str, float]) -> float:
        return smooth_eval(self, point)

    def generators(self) -> set[str]:
        raise NotImplementedError

    @staticmethod
    def from_poly(p: Poly) -> "SmoothExpr":
        terms = []
        for exps, c in p.terms.items():
            factors = [Const(c)]
            for v, e in zip(p.variables, exps):
                factors.extend([Gen(v)] * e)
            terms.append(Prod(tuple(factors)) if len(factors) > 1 else factors[0])
        if not terms:
            return Const(Fraction(0))
        return Sum(tuple(terms)) if len(terms) > 1 else terms[0]


@dataclass(frozen=True, eq=True)
class Gen(SmoothExpr):
    name: str

    def generators(self):
        return {self.name}


@dataclass(frozen=True, eq=True)
class Const(SmoothExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    def generators(self):
        return set()


@dataclass(frozen=True, eq=True)
class Sum(SmoothExpr):
    terms: tuple

    def generators(self):
        return set().union(*(t.generators() for t in self.terms))


@dataclass(frozen=True, eq=True)
class Prod(SmoothExpr):
    factors: tuple

    def generators(self):
        return set().union(*(f.generators() for f in self.factors))


@dataclass(frozen=True, eq=True)
class Compose(SmoothExpr):
    """``outer(inner)`` for an elementary smooth function ``outer``.

    For ``guarded_reciprocal`` the caller promises ``|inner| >= bound`` on
    the working domain; evaluation checks it.
    """

    outer: str
    inner: SmoothExpr
    bound: Fraction | None = field(default=None)

    def __post_init__(self):
        if self.outer not in SMOOTH_TAGS:
            raise ValueError(f"unknown smooth function {self.outer!r}")
        if self.outer == "guarded_reciprocal":
            if self.bound is None:
                raise NonpositiveBound("guarded_reciprocal needs a bound")
            b = as_fraction(self.bound)
            if b <= 0:
                raise NonpositiveBound(f"bound must be positive, got {b}")
            object.__setattr__(self, "bound", b)

    def generators(self):
        return self.inner.generators()


def as_expr(value) -> SmoothExpr:
    if isinstance(value, SmoothExpr):
        return value
    if isinstance(value, Poly):
        return SmoothExpr.from_poly(value)
    return Const(as_fraction(value))


def smooth_step(inner) -> SmoothExpr:
    """``s(t) = exp(-1/t)`` for ``t > 0`` and ``0`` otherwise."""
    return Compose("smooth_step", as_expr(inner))


def exp(inner) -> SmoothExpr:
    return Compose("exp", as_expr(inner))


def normalized_step(inner) -> SmoothExpr:
    """``n(t) = s(t) / (s(t) + s(1 - t))``: 0 for t <= 0, 1 for t >= 1.

    A separate tag rather than a quotient tree so that the flat regions
    evaluate to exact 0 and 1 (``s * (1/s)`` need not round to 1).
    """
    return Compose("normalized_step", as_expr(inner))


def smooth_invert(f, bound) -> SmoothExpr:
    """``1/f`` as an element of the ring, valid where ``|f| >= bound``."""
    bound = as_fraction(bound)
    if bound <= 0:
        raise NonpositiveBound(f"bound must be positive, got {bound}")
    return Compose("guarded_reciprocal", as_expr(f), bound)


def _step(t: float) -> float:
    return math.exp(-1.0 / t) if t > 0 else 0.0


def smooth_eval(f: SmoothExpr, point: Mapping[str, float], digits: int | None = None):
    """Evaluate ``f`` at ``point`` (generator -> value).

    Double precision by default; with ``digits`` the tree is evaluated in
    mpmath at that many significant digits and an ``mpf`` is returned.
    """
    if digits is None:
        return _eval(f, point, _FLOAT)
    import mpmath

    ctx = mpmath.mp.clone()
    ctx.dps = digits
    return _eval(f, point, _MpOps(ctx))


class _FloatOps:
    convert = staticmethod(float)
    fsum = staticmethod(math.fsum)
    exp = staticmethod(math.exp)
    step = staticmethod(_step)

    @staticmethod
    def nstep(t):
        if t <= 0:
            return 0.0
        if t >= 1:
            return 1.0
        a = _step(t)
        return a / (a + _step(1 - t))


_FLOAT = _FloatOps()


class _MpOps:
    def __init__(self, ctx):
        self.ctx = ctx

    def convert(self, x):
        if isinstance(x, Fraction):
            return self.ctx.mpf(x.numerator) / x.denominator
        return self.ctx.mpf(x)

    def fsum(self, xs):
        return self.ctx.fsum(xs)

    def exp(self, x):
        return self.ctx.exp(x)

    def step(self, t):
        return self.ctx.exp(-1 / t) if t > 0 else self.ctx.mpf(0)

    def nstep(self, t):
        if t <= 0:
            return self.ctx.mpf(0)
        if t >= 1:
            return self.ctx.mpf(1)
        a = self.step(t)
        return a / (a + self.step(1 - t))


def _eval(f: SmoothExpr, point, ops):
    if isinstance(f, Gen):
        try:
            return ops.convert(point[f.name])
        except KeyError:
            raise UnknownVariable(f"no value for generator {f.name!r}") from None
    if isinstance(f, Const):
        return ops.convert(f.value)
    if isinstance(f, Sum):
        return ops.fsum([_eval(t, point, ops) for t in f.terms])
    if isinstance(f, Prod):
        out = ops.convert(1)
        for factor in f.factors:
            out *= _eval(factor, point, ops)
        return out
    if isinstance(f, Compose):
        x = _eval(f.inner, point, ops)
        if f.outer == "exp":
            return ops.exp(x)
        if f.outer == "smooth_step":
            return ops.step(x)
        if f.outer == "normalized_step":
            return ops.nstep(x)
        if abs(x) < ops.convert(f.bound):
            raise GuardViolated(f"|{x}| below reciprocal guard {f.bound} at {dict(point)}")
        return 1 / x
    raise TypeError(f"not a smooth expression: {f!r}")
