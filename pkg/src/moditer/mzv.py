"""Multiple zeta values three ways.

The same number is computed as a nested Dirichlet sum, as an iterated
integral of dt/t and dt/(1-t) over the unit interval, and as a pullback
iterated integral of weight-2 level-4 forms along the vertical geodesic
from i-infinity to 0.  Agreement of the three routes is the point, so the
evaluators share no numerics beyond the generic quadrature layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import forms, iterint
from .config import NumericsConfig
from .errors import AccuracyError, DivergenceError, DomainError
from .forms import ModularForm
from .quad import geometric_panels, iterated_integral

__all__ = [
    "MzvIndex",
    "mzv_series",
    "mzv_p1_integral",
    "p1_word_integral",
    "mzv_modular_integral",
    "modular_raw_integral",
    "lambda_modular",
]


@dataclass(frozen=True)
class MzvIndex:
    """zeta(k_1, ..., k_d) = sum over n_1 > n_2 > ... > n_d >= 1 of
    prod n_i^(-k_i), exponents listed largest-variable first.

    Admissibility (k_1 >= 2) keeps the outer sum finite.  The reversed view
    ``ascending`` lists the exponent of the smallest variable first; that is
    the order in which the integral words below are spelled."""

    ks: tuple

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        if not ks or any(k < 1 for k in ks):
            raise DomainError("index entries must be positive integers")
        if ks[0] < 2:
            raise DomainError(
                f"inadmissible index {ks}: the outer exponent must be >= 2"
            )
        object.__setattr__(self, "ks", ks)

    @property
    def weight(self) -> int:
        return sum(self.ks)

    @property
    def depth(self) -> int:
        return len(self.ks)

    @property
    def ascending(self) -> tuple:
        return tuple(reversed(self.ks))


# --- route 1: nested series with Euler-Maclaurin tails ------------------------

# Asymptotic expansions live in the power-log family
#     f(x) = sum c[(a, b)] x^(-a) log(x)^b,
# which is closed under differentiation and antidifferentiation, so the
# Euler-Maclaurin correction of every partial sum stays in the family.

def _pl_add(f, g, scale=1.0):
    out = dict(f)
    for key, c in g.items():
        out[key] = out.get(key, 0.0) + scale * c
    return {k: v for k, v in out.items() if v}


def _pl_deriv(f):
    out = {}
    for (a, b), c in f.items():
        out[(a + 1, b)] = out.get((a + 1, b), 0.0) - a * c
        if b:
            out[(a + 1, b - 1)] = out.get((a + 1, b - 1), 0.0) + b * c
    return out


def _pl_antideriv(f):
    out = {}
    for (a, b), c in f.items():
        if a < 1:
            raise DomainError("antiderivative would leave the decaying family")
        if a == 1:
            out[(0, b + 1)] = out.get((0, b + 1), 0.0) + c / (b + 1)
            continue
        while True:  # integrate x^-a log^b by parts down to b = 0
            out[(a - 1, b)] = out.get((a - 1, b), 0.0) + c / (1 - a)
            if b == 0:
                break
            c *= -b / (1 - a)
            b -= 1
    return out


def _pl_eval(f, x: float) -> float:
    lx = math.log(x)
    return math.fsum(c * x ** (-a) * lx**b for (a, b), c in f.items())


def _em_pieces(f):
    d1 = _pl_deriv(f)
    d3 = _pl_deriv(_pl_deriv(d1))
    return d1, d3


def _em_cumsum_series(f):
    """Asymptotics of sum_{j < m} f(j) up to an additive constant."""
    d1, d3 = _em_pieces(f)
    out = _pl_antideriv(f)
    out = _pl_add(out, f, -0.5)
    out = _pl_add(out, d1, 1.0 / 12.0)
    return _pl_add(out, d3, -1.0 / 720.0)


def _em_tail_value(f, m: float) -> float:
    """sum_{j >= m} f(j) for a series whose terms all have a > 1."""
    if any(a <= 1 for a, _ in f):
        raise DivergenceError("tail of a non-decaying series")
    d1, d3 = _em_pieces(f)
    return (
        -_pl_eval(_pl_antideriv(f), m)
        + 0.5 * _pl_eval(f, m)
        - _pl_eval(d1, m) / 12.0
        + _pl_eval(d3, m) / 720.0
    )


def mzv_series(idx: MzvIndex, cutoff: int = 10_000) -> float:
    """Truncated nested sum; the tail of every partial sum is replaced by
    its integral-comparison (Euler-Maclaurin) value, so cutoff errors decay
    like cutoff^-6 rather than cutoff^(1-k)."""
    C = int(cutoff)
    if C < 16:
        raise DomainError("cutoff must be at least 16")
    ms = np.arange(C + 1, dtype=float)
    ms[0] = 1.0  # index 0 carries no mass
    qn = np.ones(C + 1)
    qn[0] = 0.0
    series, const = {}, 1.0
    for pos, k in enumerate(idx.ascending):
        P = {(a + k, b): c for (a, b), c in series.items()}
        P[(k, 0)] = P.get((k, 0), 0.0) + const
        pn = ms ** (-float(k)) * qn
        if pos == idx.depth - 1:
            return math.fsum(pn[1:]) + _em_tail_value(P, C + 1.0)
        series = _em_cumsum_series(P)
        full = math.fsum(pn[1:])
        const = full - _pl_eval(series, C + 1.0)
        qn = np.empty(C + 1)
        qn[0] = qn[1] = 0.0
        qn[2:] = np.cumsum(pn[1:-1])
    raise AssertionError("unreachable")


# --- route 2: iterated integral over the unit interval ------------------------

def _word_flags(idx: MzvIndex):
    """One flag per 1-form, first entry integrated nearest 0:
    1 for dt/(1-t), 0 for dt/t."""
    flags = []
    for k in idx.ascending:
        flags.append(1)
        flags.extend([0] * (k - 1))
    return flags


def _interval_panels(eps: float, n: int):
    low = geometric_panels(complex(eps), complex(0.5), n)
    high = [(b, a) for a, b in reversed(geometric_panels(complex(1 - eps), complex(0.5), n))]
    return low + high


def p1_word_integral(flags, config: NumericsConfig | None = None, eps: float = 1e-10) -> float:
    """Iterated integral of the word over the unit interval, flags as in
    ``_word_flags``.  The interval is trimmed to [eps, 1-eps] with panels
    clustering at both ends; a two-point Richardson step in eps removes the
    leading trim error."""
    cfg = config if config is not None else NumericsConfig()
    flags = list(flags)
    if not flags:
        return 1.0
    if flags[0] == 0:
        raise DivergenceError("word starts with dt/t: divergent at 0")
    if flags[-1] == 1:
        raise DivergenceError("word ends with dt/(1-t): divergent at 1")
    kernels = [
        (lambda z: 1.0 / (1.0 - z)) if f == 1 else (lambda z: 1.0 / z) for f in flags
    ]
    n = max(48, cfg.panels)

    def value(e):
        return iterated_integral(kernels, _interval_panels(e, n), cfg.gl_order)

    coarse, fine = value(eps), value(eps / 2)
    return (2 * fine - coarse).real


def mzv_p1_integral(idx: MzvIndex, config: NumericsConfig | None = None) -> float:
    return p1_word_integral(_word_flags(idx), config)


# --- route 3: pullback integral on the modular curve ---------------------------

_KERNEL_ORDER = 256


def _level4_pair():
    f = forms.builtin("F", _KERNEL_ORDER)
    g = forms.builtin("G", _KERNEL_ORDER)
    gm = ModularForm(4, 2, "G-16F", tuple(a - 16 * b for a, b in zip(g.coeffs, f.coeffs)))
    return f, gm


def _block_integral(flags_block, pair, cfg) -> complex:
    """Plain iterated integral of the block from i-infinity down to i/2,
    first flag integrated nearest i-infinity."""
    if not flags_block:
        return 1.0 + 0j
    f4, gm = pair
    entries = [(f4 if f == 1 else gm, 1.0) for f in reversed(flags_block)]
    return iterint.nested_quadrature(iterint.make_spec(entries), iterint.IINF, 0.5j, cfg)


def modular_raw_integral(idx: MzvIndex, config: NumericsConfig | None = None) -> complex:
    """The pullback integral along the vertical geodesic before the
    (2 pi i)^w 16^d normalization.

    The word uses F for dt/(1-t) slots and G-16F for dt/t slots.  The path
    splits at the reflection fixed point i/2; the lower half maps back to
    the upper half under z -> -1/(4z), which swaps the two kernels up to the
    factor 16 tracked per block (reversal and kernel signs cancel)."""
    cfg = config if config is not None else NumericsConfig()
    flags = _word_flags(idx)
    pair = _level4_pair()
    total = 0j
    for j in range(len(flags) + 1):
        upper = _block_integral(flags[:j], pair, cfg)
        block = flags[j:]
        swapped = [1 - f for f in reversed(block)]
        scale = 16.0 ** (len(block) - 2 * sum(block))  # 16^(#zeros - #ones)
        total += upper * scale * _block_integral(swapped, pair, cfg)
    return total


def mzv_modular_integral(idx: MzvIndex, config: NumericsConfig | None = None) -> float:
    raw = modular_raw_integral(idx, config)
    value = (2j * math.pi) ** idx.weight * 16**idx.depth * raw
    if abs(value.imag) > 1e-6 * max(1.0, abs(value.real)):
        raise AccuracyError(
            f"pullback integral has imaginary residue {value.imag:.3e}"
        )
    return value.real


def lambda_modular(z: complex, config: NumericsConfig | None = None) -> complex:
    """Hauptmodul 16 F / G mapping the upper imaginary axis to (0, 1),
    with 0 at i-infinity."""
    f, g = forms.builtin("F", _KERNEL_ORDER), forms.builtin("G", _KERNEL_ORDER)
    return 16 * forms.evaluate_at(f, z) / forms.evaluate_at(g, z)
