"""Symbolic angles ``r*pi + k + sum_s a_s * c[s]``.

``r`` is a rational multiple of pi, ``k`` a plain float in radians and each
``c[s]`` a Hamiltonian-coefficient symbol.  Text form::

    pi            -pi/2        3*pi/4       0.25
    -2.0 * c[32]  pi/2 - 2.0 * c[3] + 0.5 * c[7]
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*(?:
        (?P<pinum>\d+)\s*\*\s*pi(?:\s*/\s*(?P<piden>\d+))?   # 3*pi/4
      | pi(?:\s*/\s*(?P<piden2>\d+))?                        # pi, pi/2
      | (?P<mult>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*\*\s*c\[(?P<sym>\d+)\]
      | c\[(?P<sym2>\d+)\]
      | (?P<float>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf|nan)
    )\s*""",
    re.VERBOSE,
)


class AngleParseError(ValueError):
    pass


class UnboundSymbolError(KeyError):
    pass


@dataclass(frozen=True)
class AngleExpr:
    pi: Fraction = Fraction(0)
    const: float = 0.0
    coeffs: tuple[tuple[int, float], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[int, float] = {}
        for s, a in self.coeffs:
            merged[int(s)] = merged.get(int(s), 0.0) + float(a)
        canon = tuple(sorted((s, a) for s, a in merged.items() if a != 0.0))
        object.__setattr__(self, "coeffs", canon)
        object.__setattr__(self, "pi", Fraction(self.pi))
        object.__setattr__(self, "const", float(self.const) + 0.0)

    @classmethod
    def of_pi(cls, r: Fraction | int | str) -> AngleExpr:
        return cls(pi=Fraction(r))

    @classmethod
    def symbol(cls, s: int, multiplier: float = 1.0) -> AngleExpr:
        return cls(coeffs=((s, multiplier),))

    @classmethod
    def coerce(cls, value: AngleExpr | float | int) -> AngleExpr:
        if isinstance(value, AngleExpr):
            return value
        return cls(const=float(value))

    def __add__(self, other: AngleExpr | float) -> AngleExpr:
        other = AngleExpr.coerce(other)
        return AngleExpr(self.pi + other.pi, self.const + other.const, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> AngleExpr:
        return AngleExpr(-self.pi, -self.const, tuple((s, -a) for s, a in self.coeffs))

    def __sub__(self, other: AngleExpr | float) -> AngleExpr:
        return self + (-AngleExpr.coerce(other))

    def scale(self, k: float) -> AngleExpr:
        """Multiply by a real factor; an integer factor keeps the pi part exact."""
        if float(k).is_integer():
            pi = self.pi * int(k)
        else:
            pi = Fraction(0)
        const = self.const * k + (0.0 if float(k).is_integer() else float(self.pi) * math.pi * k)
        return AngleExpr(pi, const, tuple((s, a * k) for s, a in self.coeffs))

    @property
    def symbols(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.coeffs)

    def is_symbolic(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return self.pi == 0 and self.const == 0.0 and not self.coeffs

    def evaluate(self, binding: Mapping[int, float] | None = None) -> float:
        value = float(self.pi) * math.pi + self.const
        for s, a in self.coeffs:
            if binding is None or s not in binding:
                raise UnboundSymbolError(f"c[{s}] is unbound")
            value += a * binding[s]
        return value

    def pauli_axis(self, atol: float = 1e-12) -> str | None:
        """``"X"`` for multiples of pi, ``"Y"`` for odd multiples of pi/2, else None.

        Symbolic angles are never Pauli.
        """
        if self.coeffs:
            return None
        if self.const == 0.0:
            twice = self.pi * 2
            if twice.denominator != 1:
                return None
            return "X" if twice.numerator % 2 == 0 else "Y"
        q = self.evaluate() / (math.pi / 2)
        k = round(q)
        if abs(q - k) > atol:
            return None
        return "X" if k % 2 == 0 else "Y"

    def __str__(self) -> str:
        parts: list[tuple[bool, str]] = []
        if self.pi != 0:
            neg = self.pi < 0
            r = abs(self.pi)
            if r.numerator == 1:
                body = "pi" if r.denominator == 1 else f"pi/{r.denominator}"
            else:
                body = f"{r.numerator}*pi" + ("" if r.denominator == 1 else f"/{r.denominator}")
            parts.append((neg, body))
        if self.const != 0.0:
            parts.append((self.const < 0, repr(abs(self.const))))
        for s, a in self.coeffs:
            parts.append((a < 0, f"{abs(a)!r} * c[{s}]"))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"AngleExpr({str(self)!r})"


def parse_angle(text: str) -> AngleExpr:
    text = text.strip()
    if not text:
        raise AngleParseError("empty angle")
    pos = 0
    total = AngleExpr()
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise AngleParseError(f"cannot parse angle {text!r} at offset {pos}")
        if not first and m.group("sign") is None:
            raise AngleParseError(f"missing operator in angle {text!r} at offset {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("pinum") is not None:
            den = int(m.group("piden") or 1)
            term = AngleExpr(pi=Fraction(int(m.group("pinum")), den))
        elif m.group("mult") is not None:
            term = AngleExpr.symbol(int(m.group("sym")), float(m.group("mult")))
        elif m.group("sym2") is not None:
            term = AngleExpr.symbol(int(m.group("sym2")))
        elif m.group("float") is not None:
            term = AngleExpr(const=float(m.group("float")))
        else:
            term = AngleExpr(pi=Fraction(1, int(m.group("piden2") or 1)))
        total = total + (term if sign > 0 else -term)
        pos = m.end()
        first = False
    return total


ZERO = AngleExpr()
