"""Exact univariate rational functions and the local topological zeta function.

Denominators are products of linear factors ``N s + nu`` with positive
integers ``N, nu``; they are stored as a multiset of ``(N, nu)`` pairs so the
candidate-pole bookkeeping stays visible.  Pairs with the same ratio (say
``(36, 9)`` and ``(52, 13)``) are kept apart; poles are identified as reduced
rationals only when a :class:`PoleReport` is built.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Sequence

from .constellation import Cluster, NumericalData
from .strata import StratumTable, strata_table

Pair = tuple[int, int]  # (N, nu) for the factor N*s + nu
Rational = Fraction


# ---------------------------------------------------------------------------
# Dense polynomials over Q
# ---------------------------------------------------------------------------


def _trim(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    """Polynomial in ``s`` with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...] = ()

    @classmethod
    def of(cls, *coeffs: int | Fraction) -> "Poly":
        return cls(_trim(Fraction(c) for c in coeffs))

    @classmethod
    def linear(cls, pair: Pair) -> "Poly":
        N, nu = pair
        return cls.of(nu, N)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, s: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(_trim(x + y for x, y in zip(a, b)))

    def __mul__(self, other: "Poly | Fraction | int") -> "Poly":
        if not isinstance(other, Poly):
            return Poly(_trim(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly(_trim(out))

    __rmul__ = __mul__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def divide_linear(self, pair: Pair) -> "Poly":
        """Exact quotient by ``N s + nu``; the root ``-nu/N`` must be a root of self."""
        N, nu = pair
        root = Fraction(-nu, N)
        # synthetic division by (s - root), then divide by N
        out: list[Fraction] = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        remainder = out.pop()
        if remainder != 0:
            raise ArithmeticError(f"N s + nu = {N}s+{nu} does not divide the polynomial")
        return Poly(_trim(c / N for c in reversed(out)))

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive in Z[s]."""
        if self.is_zero():
            return Fraction(1)
        den = reduce(lambda x, y: x * y // gcd(x, y), (c.denominator for c in self.coeffs))
        num = reduce(gcd, (int(c * den) for c in self.coeffs))
        return Fraction(abs(num), den)

    def render(self, var: str = "s") -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                if mag == 1:
                    body = power
                elif mag.denominator == 1:
                    body = f"{mag}{power}"
                else:
                    body = f"{mag}*{power}"
            parts.append(("-" if sign == "-" else "") + body if not parts else f"{sign}{body}")
        return "".join(parts)


# ---------------------------------------------------------------------------
# Rational functions with factored denominators
# ---------------------------------------------------------------------------


def _factor_key(item: tuple[Pair, int]) -> tuple[int, int]:
    (N, nu), _ = item
    return (-N, nu)


@dataclass(frozen=True, eq=False)
class RationalFunctionQ:
    """``scalar * numerator / prod (N s + nu)^k`` over the rationals.

    Instances produced by the constructors below are reduced: no factor of
    the denominator vanishes at a root of the numerator.  The numerator is
    kept primitive in ``Z[s]`` with positive leading coefficient, and all
    remaining constants live in ``scalar``.
    """

    numerator: Poly
    denominator_factors: tuple[tuple[Pair, int], ...] = ()
    scalar: Fraction = Fraction(1)

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunctionQ":
        return cls(Poly(), (), Fraction(1))

    @classmethod
    def constant(cls, c: int | Fraction) -> "RationalFunctionQ":
        return cls.build(Poly.of(c), Counter())

    @classmethod
    def term(cls, coefficient: int | Fraction, pairs: Iterable[Pair]) -> "RationalFunctionQ":
        """``coefficient / prod_{(N, nu) in pairs} (N s + nu)``."""
        return cls.build(Poly.of(coefficient), Counter(pairs))

    @classmethod
    def build(
        cls, numerator: Poly, factors: Mapping[Pair, int], scalar: Fraction = Fraction(1)
    ) -> "RationalFunctionQ":
        """Reduce and normalize ``scalar * numerator / prod factors``."""
        num = numerator * scalar
        if num.is_zero():
            return cls.zero()
        remaining = Counter({p: k for p, k in factors.items() if k > 0})
        for pair in sorted(remaining):
            root = Fraction(-pair[1], pair[0])
            while remaining[pair] and num(root) == 0:
                num = num.divide_linear(pair)
                remaining[pair] -= 1
        lead = num.coeffs[-1]
        content = num.content() * (1 if lead > 0 else -1)
        num = num * (1 / content)
        items = tuple(sorted(((p, k) for p, k in remaining.items() if k), key=_factor_key))
        return cls(num, items, content)

    @classmethod
    def sum_terms(
        cls, terms: Iterable[tuple[int | Fraction, Mapping[Pair, int]]]
    ) -> "RationalFunctionQ":
        """Exact sum of ``c / prod factors`` over a common denominator, then reduce."""
        term_list = [(Fraction(c), Counter(f)) for c, f in terms if c]
        lcd: Counter[Pair] = Counter()
        for _, f in term_list:
            for p, k in f.items():
                lcd[p] = max(lcd[p], k)
        num = Poly()
        for c, f in term_list:
            part = Poly.of(c)
            for p, k in lcd.items():
                for _ in range(k - f[p]):
                    part = part * Poly.linear(p)
            num = num + part
        return cls.build(num, lcd)

    # -- queries ------------------------------------------------------------

    @property
    def factors(self) -> Counter[Pair]:
        return Counter(dict(self.denominator_factors))

    def denominator(self) -> Poly:
        out = Poly.of(1)
        for p, k in self.denominator_factors:
            for _ in range(k):
                out = out * Poly.linear(p)
        return out

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __call__(self, s: int | Fraction) -> Fraction:
        s = Fraction(s)
        den = Fraction(1)
        for (N, nu), k in self.denominator_factors:
            den *= (N * s + nu) ** k
        if den == 0:
            raise ZeroDivisionError(f"{s} is a pole")
        return self.scalar * self.numerator(s) / den

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        return RationalFunctionQ.sum_terms([])._plus(self)._plus(other)

    def _plus(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        a, b = self.factors, other.factors
        lcd = a | b
        na = self.numerator * self.scalar
        nb = other.numerator * other.scalar
        for p, k in lcd.items():
            for _ in range(k - a[p]):
                na = na * Poly.linear(p)
            for _ in range(k - b[p]):
                nb = nb * Poly.linear(p)
        return RationalFunctionQ.build(na + nb, lcd)

    def __neg__(self) -> "RationalFunctionQ":
        return RationalFunctionQ(self.numerator, self.denominator_factors, -self.scalar)

    def __sub__(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        return self + (-other)

    def __mul__(self, other: "RationalFunctionQ | int | Fraction") -> "RationalFunctionQ":
        if not isinstance(other, RationalFunctionQ):
            return RationalFunctionQ.build(self.numerator, self.factors, self.scalar * Fraction(other))
        return RationalFunctionQ.build(
            self.numerator * other.numerator,
            self.factors + other.factors,
            self.scalar * other.scalar,
        )

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunctionQ):
            return NotImplemented
        return (self.numerator * self.scalar) * other.denominator() == (
            other.numerator * other.scalar
        ) * self.denominator()

    __hash__ = None  # type: ignore[assignment]

    # -- rendering ----------------------------------------------------------

    def render(self) -> str:
        """Human form such as ``(s+3)/((2s+3)(s+1))``; constants folded into the numerator."""
        if self.is_zero():
            return "0"
        num = self.numerator * self.scalar
        text = num.render()
        if not self.denominator_factors:
            return text
        if len(num.coeffs) > 1 and sum(1 for c in num.coeffs if c) > 1:
            text = f"({text})"
        dens = []
        for p, k in self.denominator_factors:
            piece = f"({Poly.linear(p).render()})"
            dens.append(piece if k == 1 else f"{piece}^{k}")
        den = "".join(dens)
        if len(dens) > 1:
            den = f"({den})"
        return f"{text}/{den}"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"RationalFunctionQ({self.render()})"


# ---------------------------------------------------------------------------
# Poles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pole:
    s0: Fraction
    order: int
    leading_laurent_coefficient: Fraction


@dataclass(frozen=True)
class PoleReport:
    poles: tuple[Pole, ...]
    candidate_poles: tuple[Fraction, ...] = field(default_factory=tuple)

    def values(self) -> list[Fraction]:
        return [p.s0 for p in self.poles]

    def order(self, s0: Fraction) -> int:
        for p in self.poles:
            if p.s0 == s0:
                return p.order
        return 0


def pole_sort_key(s0: Fraction) -> tuple[Fraction, int, Fraction]:
    return (abs(s0), s0.denominator, s0)


def candidate_poles(nd: NumericalData) -> tuple[Fraction, ...]:
    """The distinct values ``-nu_j / N_j``, ``j = 0..r``, in pole order."""
    values = {Fraction(-nu, N) for nu, N in zip(nd.nu, nd.N)}
    return tuple(sorted(values, key=pole_sort_key))


def poles(f: RationalFunctionQ, nd: NumericalData | None = None) -> PoleReport:
    """Poles of a reduced function with their orders and leading Laurent coefficients."""
    candidates = candidate_poles(nd) if nd is not None else ()
    if f.is_zero():
        return PoleReport((), candidates)
    grouped: dict[Fraction, list[tuple[Pair, int]]] = {}
    for pair, k in f.denominator_factors:
        grouped.setdefault(Fraction(-pair[1], pair[0]), []).append((pair, k))
    found: list[Pole] = []
    for s0, here in grouped.items():
        order = sum(k for _, k in here)
        value = f.scalar * f.numerator(s0)
        for (N, _), k in here:
            value /= Fraction(N) ** k
        for (N, nu), k in f.denominator_factors:
            if Fraction(-nu, N) != s0:
                value /= (N * s0 + nu) ** k
        found.append(Pole(s0, order, value))
    found.sort(key=lambda p: pole_sort_key(p.s0))
    return PoleReport(tuple(found), candidates)


# ---------------------------------------------------------------------------
# Topological zeta functions
# ---------------------------------------------------------------------------


def zeta_terms(
    table: StratumTable, r: int = 1
) -> list[tuple[int, Counter[Pair]]]:
    """Unreduced summands ``(χ_I, {(N_i, nu_i)})`` of ``Z^(r)``.

    ``I = {0}`` and ``I = ∅`` never occur in the table; they do not meet the
    fibre over the origin.  For ``r >= 2`` every ``I`` containing the strict
    transform drops out because ``N_0 = 1``.
    """
    nd = table.numerical
    out: list[tuple[int, Counter[Pair]]] = []
    for key, chi in table.entries.items():
        if chi and all(nd.N[i] % r == 0 for i in key):
            out.append((chi, Counter(nd.pair(i) for i in key)))
    return out


def z_top(cl: Cluster, table: StratumTable | None = None) -> RationalFunctionQ:
    """The local topological zeta function of a surface general for the cluster."""
    return z_top_r(cl, 1, table)


def z_top_r(cl: Cluster, r: int, table: StratumTable | None = None) -> RationalFunctionQ:
    """The twisted zeta function ``Z^(r)``: only strata whose divisors all have ``r | N``."""
    if r < 1:
        raise ValueError("r must be positive")
    table = table or strata_table(cl)
    return RationalFunctionQ.sum_terms(zeta_terms(table, r))


def evaluate_terms(terms: Sequence[tuple[int, Mapping[Pair, int]]], s: Fraction) -> Fraction:
    """Evaluate an unreduced sum of terms at ``s`` (for cross-checks)."""
    total = Fraction(0)
    for chi, pairs in terms:
        den = Fraction(1)
        for (N, nu), k in pairs.items():
            den *= (N * s + nu) ** k
        total += Fraction(chi) / den
    return total


def format_rational(x: Fraction) -> str:
    """``a/b`` (or ``a`` when integral)."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


__all__ = [
    "Pair",
    "Pole",
    "PoleReport",
    "Poly",
    "RationalFunctionQ",
    "candidate_poles",
    "evaluate_terms",
    "format_rational",
    "pole_sort_key",
    "poles",
    "z_top",
    "z_top_r",
    "zeta_terms",
]
