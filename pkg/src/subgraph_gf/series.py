"""Exact truncated power series in the variables z, w, u, x.

Coefficients are :class:`fractions.Fraction`.  A truncation order of
``None`` means the series is exact (polynomial) in that variable; a finite
order ``T`` means only exponents ``<= T`` are known.  Every operation
truncates to the meet of its operands' orders, and asking for a
coefficient beyond the order is an error rather than a silent zero.

Dense univariate helpers at the bottom handle the x direction, where
``Delta(x)**n`` has every coefficient populated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2

VARS = ("z", "w", "u", "x")
_INDEX = {v: i for i, v in enumerate(VARS)}


class TruncationError(ValueError):
    """A coefficient was requested beyond what a series actually knows."""


def _trunc_tuple(trunc) -> tuple:
    if trunc is None:
        return (None,) * 4
    if isinstance(trunc, tuple) and len(trunc) == 4:
        return trunc
    out = [None] * 4
    for name, order in dict(trunc).items():
        out[_INDEX[name]] = None if order is None else int(order)
    return tuple(out)


def _meet(a: tuple, b: tuple) -> tuple:
    return tuple(x if y is None else y if x is None else min(x, y) for x, y in zip(a, b))


def _fits(exps: tuple, trunc: tuple) -> bool:
    return all(t is None or e <= t for e, t in zip(exps, trunc))


class TruncSeries:
    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Mapping[tuple, object] | None = None, trunc=None):
        self.trunc = _trunc_tuple(trunc)
        clean = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(exps)
            if len(exps) != 4 or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps}")
            c = Fraction(c)
            if c and _fits(exps, self.trunc):
                clean[exps] = clean.get(exps, 0) + c
        self.coeffs = {e: c for e, c in clean.items() if c}

    # --- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, c=1, trunc=None) -> "TruncSeries":
        return cls({(0, 0, 0, 0): c}, trunc)

    @classmethod
    def monomial(cls, coeff=1, trunc=None, **powers) -> "TruncSeries":
        exps = [0, 0, 0, 0]
        for name, p in powers.items():
            exps[_INDEX[name]] = p
        return cls({tuple(exps): coeff}, trunc)

    @classmethod
    def var(cls, name: str, trunc=None) -> "TruncSeries":
        return cls.monomial(1, trunc, **{name: 1})

    @classmethod
    def univariate(cls, name: str, coeffs: Sequence, trunc=None) -> "TruncSeries":
        i = _INDEX[name]
        out = {}
        for p, c in enumerate(coeffs):
            exps = [0, 0, 0, 0]
            exps[i] = p
            out[tuple(exps)] = c
        return cls(out, trunc)

    # --- introspection --------------------------------------------------

    @property
    def vars(self) -> tuple[str, ...]:
        used = set()
        for exps in self.coeffs:
            used.update(i for i, e in enumerate(exps) if e)
        used.update(i for i, t in enumerate(self.trunc) if t is not None)
        return tuple(VARS[i] for i in sorted(used))

    def order(self, name: str):
        return self.trunc[_INDEX[name]]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"TruncSeries({len(self.coeffs)} terms, trunc={dict(zip(VARS, self.trunc))})"

    def truncate(self, trunc) -> "TruncSeries":
        return TruncSeries(self.coeffs, _meet(self.trunc, _trunc_tuple(trunc)))

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality on the shared truncation region."""
        t = _meet(self.trunc, other.trunc)
        return self.truncate(t).coeffs == other.truncate(t).coeffs

    # --- ring operations ------------------------------------------------

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries.constant(other)

    def __add__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return TruncSeries(out, _meet(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries({e: -c for e, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other) -> "TruncSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncSeries":
        return self._coerce(other) - self

    def scale(self, c) -> "TruncSeries":
        c = Fraction(c)
        return TruncSeries({e: v * c for e, v in self.coeffs.items()}, self.trunc)

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        trunc = _meet(self.trunc, other.trunc)
        out: dict = {}
        right = list(other.coeffs.items())
        for ea, ca in self.coeffs.items():
            if not _fits(ea, trunc):
                continue
            for eb, cb in right:
                e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
                if _fits(e, trunc):
                    out[e] = out.get(e, 0) + ca * cb
        return TruncSeries(out, trunc)

    def __rmul__(self, other) -> "TruncSeries":
        return self.scale(other)

    def __truediv__(self, c) -> "TruncSeries":
        return self.scale(1 / Fraction(c))

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = TruncSeries.constant(1, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _check_nilpotent(self) -> None:
        # every term must be killed by truncation after finitely many products
        for exps in self.coeffs:
            if not any(e and t is not None for e, t in zip(exps, self.trunc)):
                raise TruncationError(
                    f"monomial {exps} has no truncated variable; series powers never terminate"
                )

    def exp(self) -> "TruncSeries":
        """``sum a**k / k!``; the constant term must vanish."""
        if self.coeffs.get((0, 0, 0, 0)):
            raise ValueError("exp needs a series with zero constant term")
        self._check_nilpotent()
        result = TruncSeries.constant(1, self.trunc)
        term = result
        k = 0
        while True:
            k += 1
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                return result
            result = result + term

    # --- substitutions --------------------------------------------------

    def substitute(self, name: str, repl: "TruncSeries") -> "TruncSeries":
        """Compose ``name <- repl``.

        Safe when ``repl`` has zero constant term (valuation preserved), or
        when this series is exact in ``name`` so that every contributing
        power is present.
        """
        i = _INDEX[name]
        has_const = bool(repl.coeffs.get((0, 0, 0, 0)))
        if has_const and self.trunc[i] is not None:
            raise TruncationError(
                f"substituting a series with a constant term needs the series to be exact in {name}"
            )
        if not has_const:
            repl._check_nilpotent()
        trunc = _meet(self.trunc, repl.trunc)
        groups: dict[int, dict] = {}
        for exps, c in self.coeffs.items():
            rest = list(exps)
            p = rest[i]
            rest[i] = 0
            groups.setdefault(p, {})[tuple(rest)] = c
        out = TruncSeries({}, trunc)
        power = TruncSeries.constant(1, trunc)
        for p in range(max(groups, default=-1) + 1):
            if p in groups:
                out = out + TruncSeries(groups[p], trunc) * power
            power = power * repl
            if power.is_zero():
                break
        return out

    def subst_edge_var(self) -> "TruncSeries":
        """``w <- w/(1+w)``."""
        t = self.order("w")
        if t is None:
            t = self.max_degree("w")
        geo = TruncSeries.univariate("w", [0] + [(-1) ** (j - 1) for j in range(1, t + 1)], {"w": t})
        return self.substitute("w", geo)

    def subst_edge_var_inverse(self) -> "TruncSeries":
        """``w <- w/(1-w)``, the inverse of :meth:`subst_edge_var`."""
        t = self.order("w")
        if t is None:
            t = self.max_degree("w")
        geo = TruncSeries.univariate("w", [0] + [1] * t, {"w": t})
        return self.substitute("w", geo)

    def shift(self, name: str, c) -> "TruncSeries":
        """``name <- name + c``; requires the series to be exact in ``name``."""
        repl = TruncSeries({(0, 0, 0, 0): c, tuple(int(j == _INDEX[name]) for j in range(4)): 1})
        return self.substitute(name, repl)

    def max_degree(self, name: str) -> int:
        i = _INDEX[name]
        return max((e[i] for e in self.coeffs), default=0)

    # --- extraction ---------------------------------------------------

    def extract(self, z: int = 0, w: int = 0, u: int = 0, x: int = 0) -> Fraction:
        exps = (z, w, u, x)
        if not _fits(exps, self.trunc):
            raise TruncationError(f"coefficient {dict(zip(VARS, exps))} lies beyond truncation "
                                  f"{dict(zip(VARS, self.trunc))}")
        return self.coeffs.get(exps, Fraction(0))

    def items(self):
        return self.coeffs.items()

    def dump(self) -> str:
        """One ``num/den z^a w^b u^c x^d`` line per monomial, sorted by exponents."""
        lines = []
        for exps in sorted(self.coeffs):
            c = self.coeffs[exps]
            lines.append(f"{c.numerator}/{c.denominator} z^{exps[0]} w^{exps[1]} u^{exps[2]} x^{exps[3]}")
        return "\n".join(lines) + ("\n" if lines else "")


def binom_power(N: int, trunc_w: int) -> TruncSeries:
    """``(1+w)**N`` keeping only ``trunc_w + 1`` coefficients; N may be huge."""
    coeffs = []
    c = 1
    for j in range(min(N, trunc_w) + 1):
        coeffs.append(c)
        c = c * (N - j) // (j + 1)
    return TruncSeries.univariate("w", coeffs, {"w": trunc_w})


def exp_z(trunc_z: int) -> TruncSeries:
    return TruncSeries.var("z", {"z": trunc_z}).exp()


# --- degree-marked generating functions --------------------------------


@dataclass(frozen=True)
class MarkedTerm:
    coeff: Fraction
    z_pow: int
    w_pow: int
    degrees: tuple  # one required degree per vertex, sorted

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees)))
        if len(self.degrees) != self.z_pow:
            raise ValueError("a marked term needs exactly one degree mark per vertex")


@dataclass(frozen=True)
class DegreeMarkedGF:
    """Family generating function whose vertices carry degree marks.

    ``sum coeff * prod(delta_s) * w**w_pow * z**z_pow``; the weights
    ``w^m/(2^m m!)`` and ``z^n/n!`` are already folded into ``coeff``.
    """

    terms: tuple = ()

    def __add__(self, other: "DegreeMarkedGF") -> "DegreeMarkedGF":
        return DegreeMarkedGF(self.terms + other.terms)

    @property
    def max_z(self) -> int:
        return max((t.z_pow for t in self.terms), default=0)

    @property
    def max_w(self) -> int:
        return max((t.w_pow for t in self.terms), default=0)


def poly_derivative(coeffs: Sequence[Fraction], order: int = 1) -> list[Fraction]:
    out = [Fraction(c) for c in coeffs]
    for _ in range(order):
        out = [out[i] * i for i in range(1, len(out))]
    return out or [Fraction(0)]


def substitute_degree_marks(g: DegreeMarkedGF, delta: Sequence, trunc_x: int) -> TruncSeries:
    """Replace each mark ``delta_s`` by the s-th derivative of ``delta``; result in (z, w, x)."""
    derivs: dict[int, list[Fraction]] = {}

    def deriv(s: int) -> list[Fraction]:
        if s not in derivs:
            derivs[s] = poly_derivative(delta, s)[: trunc_x + 1]
        return derivs[s]

    out: dict = {}
    for term in g.terms:
        poly = [Fraction(term.coeff)]
        for s in term.degrees:
            poly = poly_mul(poly, deriv(s), trunc_x)
        for p, c in enumerate(poly):
            if c:
                key = (term.z_pow, term.w_pow, 0, p)
                out[key] = out.get(key, 0) + c
    return TruncSeries(out, {"x": trunc_x})


# --- dense univariate arithmetic (x direction) -------------------------


def poly_mul(a: Sequence, b: Sequence, trunc: int | None = None) -> list:
    """Schoolbook product, truncated to degree ``trunc``."""
    if not a or not b:
        return []
    size = len(a) + len(b) - 1
    if trunc is not None:
        size = min(size, trunc + 1)
    out = [0] * size
    for i, ca in enumerate(a):
        if i >= size or not ca:
            continue
        for j in range(min(len(b), size - i)):
            out[i + j] += ca * b[j]
    return out


def _int_poly_mul_kronecker(a: Sequence[int], b: Sequence[int], trunc: int, slot_bits: int) -> list[int]:
    # pack nonnegative integer coefficients into one big integer per operand
    slot_bytes = (slot_bits + 7) // 8
    a = list(a[: trunc + 1])
    b = list(b[: trunc + 1])
    pa = gmpy2.mpz(int.from_bytes(b"".join(int(c).to_bytes(slot_bytes, "little") for c in a), "little"))
    pb = gmpy2.mpz(int.from_bytes(b"".join(int(c).to_bytes(slot_bytes, "little") for c in b), "little"))
    prod = int(pa * pb)
    size = min(len(a) + len(b) - 1, trunc + 1)
    raw = prod.to_bytes(max(1, (prod.bit_length() + 7) // 8), "little")
    raw = raw.ljust(size * slot_bytes, b"\0")
    return [int.from_bytes(raw[i * slot_bytes:(i + 1) * slot_bytes], "little") for i in range(size)]


KRONECKER_THRESHOLD = 64


def int_poly_pow(coeffs: Sequence[int], n: int, trunc: int) -> list[int]:
    """``P(x)**n`` mod ``x**(trunc+1)`` for a polynomial with nonnegative integer coefficients."""
    if any(c < 0 for c in coeffs):
        raise ValueError("int_poly_pow requires nonnegative coefficients")
    base = [int(c) for c in coeffs[: trunc + 1]] or [0]
    result = [1]
    # every coefficient of P**e is bounded by P(1)**e
    total = max(sum(base), 1)
    e_done = 0
    e_base = 1
    k = n
    while k:
        if k & 1:
            bits = (e_done + e_base) * total.bit_length() + 8
            result = _mul_nonneg(result, base, trunc, bits)
            e_done += e_base
        k >>= 1
        if k:
            bits = 2 * e_base * total.bit_length() + 8
            base = _mul_nonneg(base, base, trunc, bits)
            e_base *= 2
    return result + [0] * (trunc + 1 - len(result))


def _mul_nonneg(a: list[int], b: list[int], trunc: int, slot_bits: int) -> list[int]:
    if min(len(a), len(b)) < KRONECKER_THRESHOLD:
        return poly_mul(a, b, trunc)
    return _int_poly_mul_kronecker(a, b, trunc, slot_bits)


def poly_pow(coeffs: Sequence, n: int, trunc: int) -> list[Fraction]:
    """Exact ``P(x)**n`` truncated at ``x**trunc`` for rational nonnegative coefficients."""
    fr = [Fraction(c) for c in coeffs]
    if any(c < 0 for c in fr):
        raise ValueError("poly_pow requires nonnegative coefficients")
    scale = 1
    for c in fr:
        scale = math.lcm(scale, c.denominator)
    ints = [int(c * scale) for c in fr]
    raw = int_poly_pow(ints, n, trunc)
    denom = scale ** n
    return [Fraction(c, denom) for c in raw]
