"""Truncated power-series arithmetic on plain coefficient lists.

A series is a list of float coefficients ``c[0..n]`` representing
``sum c_k x^k`` truncated after ``x^n``.  All operations keep the
truncation order of their inputs.  This is the workhorse behind the
partner-angle expansion and the Laurent coefficients of the singular
field integrands; plain Python floats are deliberate (no array overhead
for length-16 polynomials, and rounding behaviour stays transparent).
"""

from __future__ import annotations

import math

__all__ = [
    "mul",
    "recip",
    "compose_taylor",
    "sin_series",
    "cos_series",
    "polyval",
    "polyder",
]


def mul(a: list[float], b: list[float]) -> list[float]:
    """Product truncated to the shorter input's order."""
    n = min(len(a), len(b))
    out = [0.0] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0.0:
            continue
        for j in range(n - i):
            out[i + j] += ai * b[j]
    return out


def recip(a: list[float]) -> list[float]:
    """Multiplicative inverse; requires a[0] != 0."""
    if a[0] == 0.0:
        raise ZeroDivisionError("series has zero constant term")
    n = len(a)
    out = [0.0] * n
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        s = 0.0
        for j in range(1, k + 1):
            s += a[j] * out[k - j]
        out[k] = -s / a[0]
    return out


def compose_taylor(taylor: list[float], u: list[float]) -> list[float]:
    """Evaluate sum taylor_m * u(x)^m for a series u with u[0] == 0.

    ``taylor`` holds the outer function's Taylor coefficients about the
    point u expands around.
    """
    if u[0] != 0.0:
        raise ValueError("inner series must have zero constant term")
    n = len(u)
    out = [0.0] * n
    out[0] = taylor[0] if taylor else 0.0
    upow = [0.0] * n
    upow[0] = 1.0
    for m in range(1, min(len(taylor), n)):
        upow = mul(upow, u)
        cm = taylor[m]
        if cm == 0.0:
            continue
        for k in range(n):
            out[k] += cm * upow[k]
    return out


def _sincos_of_reduced(u: list[float]) -> tuple[list[float], list[float]]:
    # sin(u), cos(u) for a series with zero constant term
    n = len(u)
    sin_t = [0.0] * n
    cos_t = [0.0] * n
    cos_t[0] = 1.0
    term = [0.0] * n
    term[0] = 1.0
    for m in range(1, n):
        term = mul(term, u)
        f = 1.0 / math.factorial(m)
        if m % 4 == 1:
            dst, sign = sin_t, 1.0
        elif m % 4 == 2:
            dst, sign = cos_t, -1.0
        elif m % 4 == 3:
            dst, sign = sin_t, -1.0
        else:
            dst, sign = cos_t, 1.0
        for k in range(n):
            dst[k] += sign * f * term[k]
    return sin_t, cos_t


def sin_series(g: list[float]) -> list[float]:
    """sin of a series with arbitrary constant term."""
    g0, u = g[0], [0.0] + list(g[1:])
    s, c = _sincos_of_reduced(u)
    cs, cc = math.sin(g0), math.cos(g0)
    return [cs * c[k] + cc * s[k] for k in range(len(g))]


def cos_series(g: list[float]) -> list[float]:
    """cos of a series with arbitrary constant term."""
    g0, u = g[0], [0.0] + list(g[1:])
    s, c = _sincos_of_reduced(u)
    cs, cc = math.sin(g0), math.cos(g0)
    return [cc * c[k] - cs * s[k] for k in range(len(g))]


def polyval(coeffs: list[float], x: float) -> float:
    """Horner evaluation of sum coeffs_k x^k."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def polyder(coeffs: list[float], order: int = 1) -> list[float]:
    """Coefficient list of the order-th derivative."""
    out = list(coeffs)
    for _ in range(order):
        out = [k * out[k] for k in range(1, len(out))]
        if not out:
            out = [0.0]
    return out
