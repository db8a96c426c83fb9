"""A'Campo's characteristic polynomial and the pole/eigenvalue checks.

For a surface singularity resolved by divisors with numerical data ``N_j``
and Euler characteristics ``χ_j = χ(E_j°)``, the characteristic polynomial of
the monodromy at the origin is

    prod_j (1 - t^{N_j})^{χ_j} / (1 - t).

Since ``1 - t^N = -prod_{d | N} Φ_d(t)``, it is kept as the exponent map
``d -> e_d = sum_{d | N_j} χ_j - [d = 1]``.  Signs are irrelevant for the
eigenvalue questions, so the map carries everything needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .constellation import Cluster, NumericalData
from .errors import NegativeExponent
from .ratzeta import PoleReport, RationalFunctionQ, poles, z_top, z_top_r
from .strata import StratumTable, strata_table


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic(d: int) -> list[int]:
    """Integer coefficients of ``Φ_d``, lowest degree first."""
    num = [-1] + [0] * (d - 1) + [1]  # t^d - 1
    for k in divisors(d)[:-1]:
        num = _exact_div(num, cyclotomic(k))
    return num


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c, rem = divmod(a[k + len(b) - 1], b[-1])
        assert rem == 0
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    assert not any(a), "inexact division"
    return q


@dataclass(frozen=True)
class CyclotomicProduct:
    """``prod_d Φ_d(t)^{e_d}`` stored as the nonzero exponents, sorted by ``d``."""

    items: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_exponents(cls, exponents: Mapping[int, int]) -> "CyclotomicProduct":
        return cls(tuple(sorted((d, e) for d, e in exponents.items() if e)))

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.items)

    def exponent(self, d: int) -> int:
        return self.exponents.get(d, 0)

    @property
    def milnor_number(self) -> int:
        """Degree of the product."""
        return sum(e * euler_phi(d) for d, e in self.items)

    def is_polynomial(self) -> bool:
        return all(e >= 0 for _, e in self.items)

    def expand(self) -> list[int]:
        """Integer coefficients (lowest degree first); only for genuine polynomials."""
        if not self.is_polynomial():
            raise NegativeExponent(f"negative exponent in {self.items}")
        out = [1]
        for d, e in self.items:
            phi = cyclotomic(d)
            for _ in range(e):
                out = _poly_mul(out, phi)
        return out


def acampo(cl: Cluster, table: StratumTable | None = None) -> CyclotomicProduct:
    """The characteristic polynomial of the monodromy at the origin."""
    table = table or strata_table(cl)
    N = table.numerical.N
    exps: dict[int, int] = {1: -1}
    for j in cl.points:
        chi = table.single(j)
        for d in divisors(N[j]):
            exps[d] = exps.get(d, 0) + chi
    return CyclotomicProduct.from_exponents(exps)


def eigenvalue_orders(cp: CyclotomicProduct) -> frozenset[int]:
    """Orders of the monodromy eigenvalues, including 1 (always present near the origin)."""
    if not cp.is_polynomial():
        raise NegativeExponent(f"negative exponent in {cp.items}")
    return frozenset({d for d, e in cp.items if e > 0} | {1})


def J(nd: NumericalData, b: int) -> tuple[int, ...]:
    """Exceptional divisors with ``b | N_j``."""
    return tuple(j for j in range(1, len(nd.N)) if nd.N[j] % b == 0)


def chi_sum(table: StratumTable, indices: Iterable[int]) -> int:
    return sum(table.single(j) for j in indices)


# ---------------------------------------------------------------------------
# Monodromy conjecture
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoleCheck:
    s0: Fraction
    order: int
    b: int
    J_b: tuple[int, ...]
    chi_sum: int

    @property
    def eigenvalue_verdict(self) -> bool:
        return self.b == 1 or self.chi_sum != 0


@dataclass(frozen=True)
class ConjectureReport:
    checks: tuple[PoleCheck, ...]

    @property
    def verdict(self) -> bool:
        return all(c.eigenvalue_verdict for c in self.checks)


def check_monodromy(
    cl: Cluster, table: StratumTable | None = None, zeta: RationalFunctionQ | None = None
) -> ConjectureReport:
    """Whether ``exp(2 pi i s0)`` is an eigenvalue for every pole ``s0`` of ``Z_top``."""
    table = table or strata_table(cl)
    zeta = zeta if zeta is not None else z_top(cl, table)
    nd = table.numerical
    checks = []
    for pole in poles(zeta, nd).poles:
        b = pole.s0.denominator
        jb = J(nd, b)
        checks.append(PoleCheck(pole.s0, pole.order, b, jb, chi_sum(table, jb)))
    return ConjectureReport(tuple(checks))


# ---------------------------------------------------------------------------
# Holomorphy conjecture
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolomorphyCheck:
    r: int
    exempt: bool
    pole_count: int

    @property
    def verdict(self) -> bool:
        return self.exempt or self.pole_count == 0


@dataclass(frozen=True)
class HolomorphyReport:
    orders: frozenset[int]
    checks: tuple[HolomorphyCheck, ...]

    @property
    def verdict(self) -> bool:
        return all(c.verdict for c in self.checks)

    @property
    def tested(self) -> list[int]:
        return [c.r for c in self.checks if not c.exempt]


def check_holomorphy(
    cl: Cluster, r_max: int | None = None, table: StratumTable | None = None
) -> HolomorphyReport:
    """``Z^(r)`` has no poles whenever ``r`` divides no eigenvalue order (``2 <= r <= r_max``)."""
    table = table or strata_table(cl)
    orders = eigenvalue_orders(acampo(cl, table))
    r_max = r_max if r_max is not None else max(table.numerical.N)
    checks = []
    for r in range(2, r_max + 1):
        if any(d % r == 0 for d in orders):
            checks.append(HolomorphyCheck(r, True, 0))
            continue
        zr = z_top_r(cl, r, table)
        checks.append(HolomorphyCheck(r, False, len(poles(zr).poles)))
    return HolomorphyReport(orders, tuple(checks))


# ---------------------------------------------------------------------------
# Divisors with positive Euler characteristic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositiveChiCheck:
    j: int
    chi: int
    ratio: Fraction  # nu_j / N_j
    sum_ratio_denominator: int  # sum over J_b, b the denominator of nu_j/N_j
    sum_dividing: int  # sum over i with N_j | N_i

    @property
    def verdict(self) -> bool:
        return self.sum_ratio_denominator != 0 and self.sum_dividing != 0


@dataclass(frozen=True)
class PositiveChiReport:
    checks: tuple[PositiveChiCheck, ...]

    @property
    def verdict(self) -> bool:
        return all(c.verdict for c in self.checks)


def positive_chi_eigenvalue_checks(
    cl: Cluster, table: StratumTable | None = None
) -> PositiveChiReport:
    """For ``χ_j > 0`` both ``exp(-2 pi i nu_j/N_j)`` and ``exp(2 pi i/N_j)`` are eigenvalues."""
    table = table or strata_table(cl)
    nd = table.numerical
    checks = []
    for j in cl.points:
        chi = table.single(j)
        if chi <= 0:
            continue
        ratio = Fraction(nd.nu[j], nd.N[j])
        by_ratio = chi_sum(table, J(nd, ratio.denominator))
        by_divisibility = chi_sum(table, J(nd, nd.N[j]))
        checks.append(PositiveChiCheck(j, chi, ratio, by_ratio, by_divisibility))
    return PositiveChiReport(tuple(checks))


def criterion_consistency(cl: Cluster, table: StratumTable | None = None) -> bool:
    """For every ``χ_j > 0`` the sum over ``J_b`` (``b`` from ``nu_j/N_j``) is strictly positive."""
    table = table or strata_table(cl)
    nd = table.numerical
    return all(
        chi_sum(table, J(nd, Fraction(nd.nu[j], nd.N[j]).denominator)) > 0
        for j in cl.points
        if table.single(j) > 0
    )


# ---------------------------------------------------------------------------
# Negative Euler characteristic: the compensating chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompensationCheck:
    """A divisor ``t`` with ``χ_t < 0`` and the chain of equal multiplicity above it."""

    t: int
    chain: tuple[int, ...]  # points after t with multiplicity m_t, ending in l
    data_follow_pattern: bool
    divisibility_propagates: bool
    l_ratio_denominator_avoids_t: bool
    chi_t: int
    chi_l: int

    @property
    def l(self) -> int:
        return self.chain[-1]

    @property
    def verdict(self) -> bool:
        return (
            self.data_follow_pattern
            and self.divisibility_propagates
            and self.l_ratio_denominator_avoids_t
            and self.chi_t + self.chi_l >= 0
        )


def compensation_checks(
    cl: Cluster, table: StratumTable | None = None
) -> tuple[CompensationCheck, ...]:
    """Check the chain attached to every divisor with negative Euler characteristic.

    Such a ``Q_t`` has a child ``Q_t(a)`` of the same multiplicity; following
    label ``a`` while the multiplicity stays ``m_t`` gives ``Q_l``.  Along the
    chain the numerical data are ``(n nu_t - (n - 1), n N_t)``, so every
    divisor of ``N_t`` divides all of them, and the denominator of
    ``nu_l / N_l`` does not divide ``N_t``.
    """
    table = table or strata_table(cl)
    nd = table.numerical
    c = cl.constellation
    out = []
    for t in cl.points:
        chi_t = table.single(t)
        if chi_t >= 0:
            continue
        m = cl.m(t)
        starts = [(a, k) for a, k in c.children(t).items() if cl.m(k) == m]
        assert len(starts) == 1, f"Q_{t} with negative χ lacks an equal-multiplicity child"
        a, cur = starts[0]
        chain = []
        while cur is not None and cl.m(cur) == m:
            chain.append(cur)
            cur = c.child(cur, a)
        pattern = all(
            nd.N[q] == n * nd.N[t] and nd.nu[q] == n * nd.nu[t] - (n - 1)
            for n, q in enumerate(chain, start=2)
        )
        propagates = all(
            all(nd.N[q] % b == 0 for q in chain) for b in divisors(nd.N[t])
        )
        l = chain[-1]
        d = Fraction(nd.nu[l], nd.N[l]).denominator
        out.append(
            CompensationCheck(
                t=t,
                chain=tuple(chain),
                data_follow_pattern=pattern,
                divisibility_propagates=propagates,
                l_ratio_denominator_avoids_t=nd.N[t] % d != 0,
                chi_t=chi_t,
                chi_l=table.single(l),
            )
        )
    return tuple(out)



@dataclass(frozen=True)
class FullCheck:
    """Everything ``check`` verifies for one cluster."""

    monodromy: ConjectureReport
    holomorphy: HolomorphyReport
    positive_chi: PositiveChiReport
    compensation: tuple[CompensationCheck, ...]
    consistency: bool
    pole_report: PoleReport = field(repr=False, default=PoleReport(()))

    @property
    def verdict(self) -> bool:
        return (
            self.monodromy.verdict
            and self.holomorphy.verdict
            and self.positive_chi.verdict
            and all(c.verdict for c in self.compensation)
            and self.consistency
        )


def full_check(cl: Cluster, r_max: int | None = None) -> FullCheck:
    table = strata_table(cl)
    zeta = z_top(cl, table)
    return FullCheck(
        monodromy=check_monodromy(cl, table, zeta),
        holomorphy=check_holomorphy(cl, r_max, table),
        positive_chi=positive_chi_eigenvalue_checks(cl, table),
        compensation=compensation_checks(cl, table),
        consistency=criterion_consistency(cl, table),
        pole_report=poles(zeta, table.numerical),
    )


__all__ = [
    "CompensationCheck",
    "ConjectureReport",
    "CyclotomicProduct",
    "FullCheck",
    "HolomorphyCheck",
    "HolomorphyReport",
    "J",
    "PoleCheck",
    "PositiveChiCheck",
    "PositiveChiReport",
    "acampo",
    "check_holomorphy",
    "check_monodromy",
    "chi_sum",
    "compensation_checks",
    "criterion_consistency",
    "cyclotomic",
    "divisors",
    "eigenvalue_orders",
    "euler_phi",
    "full_check",
    "positive_chi_eigenvalue_checks",
]
