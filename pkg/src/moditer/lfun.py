"""Multiple modular L-series.

L(f_1..f_n; s_1..s_n) = (-2 pi i)^{-(s_1+..+s_n)} *
    sum over m_1..m_n >= 1 of
    prod a^(i)_{m_i} / ((m_1+..+m_n)^{s_1} (m_2+..+m_n)^{s_2} .. m_n^{s_n})

L_direct sums the series by shells of constant total index T = m_1+..+m_n,
ascending in T and lexicographically within each shell (realized as a
convolution cascade).  L_continued evaluates the same function anywhere by
expanding it into iterated integrals of the forms themselves.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import identities, iterint
from .config import NumericsConfig
from .errors import DivergenceError, DomainError, PoleError, TruncationError
from .forms import ModularForm
from .kernels import conv_complex

__all__ = [
    "LSpec",
    "LValue",
    "L_direct",
    "L_continued",
    "evaluate_L_terms",
    "evaluate_I_terms",
]


@dataclass(frozen=True)
class LSpec:
    forms: tuple
    s: tuple

    def __post_init__(self):
        if not self.forms or len(self.forms) != len(self.s):
            raise DomainError("need one exponent per form")


@dataclass(frozen=True)
class LValue:
    value: complex
    tail_estimate: float
    last_shell: complex


def _growth_exponent(f: ModularForm) -> float:
    # coefficient growth |a_m| <~ m^g, with 1/2 slack for the divisor factor
    return (f.weight - 1) / 2 + 0.5 if f.is_cuspidal else f.weight - 1 + 0.5


def convergence_threshold(spec: LSpec) -> float:
    """Sufficient lower bound on Re(s_1) for absolute shell convergence."""
    gs = [_growth_exponent(f) for f in spec.forms]
    need = gs[0] + 1.0
    for g, s in zip(gs[1:], spec.s[1:]):
        need += max(0.0, g - complex(s).real + 1.0)
    return need


def L_direct(spec: LSpec, config: NumericsConfig | None = None, force: bool = False) -> LValue:
    cfg = config if config is not None else NumericsConfig()
    C = cfg.cutoff
    n = len(spec.forms)
    for f in spec.forms:
        if f.order < C:
            raise TruncationError(
                f"form {f.label!r} has {f.order} coefficients, cutoff {C} needs at least that many"
            )
    need = convergence_threshold(spec)
    s1 = complex(spec.s[0]).real
    if s1 <= need and not force:
        raise DivergenceError(
            f"shell sum not provably convergent: Re(s_1) = {s1:g} <= {need:g}; "
            "pass force=True to sum anyway or use L_continued"
        )

    ts = np.arange(C + 1, dtype=float)
    ts[0] = 1.0  # index 0 never carries mass
    acc = None
    for r in range(n - 1, -1, -1):
        f = spec.forms[r]
        coeffs = np.zeros(C + 1, dtype=complex)
        coeffs[1 : C + 1] = [complex(c) for c in f.coeffs[1 : C + 1]]
        acc = coeffs if acc is None else conv_complex(coeffs, acc)[: C + 1]
        acc = acc * np.exp(-complex(spec.s[r]) * np.log(ts))
    shells = acc
    sum_s = sum(complex(v) for v in spec.s)
    pref = cmath.exp(-sum_s * cmath.log(-2j * cmath.pi))
    value = pref * complex(shells.sum())

    mags = np.abs(shells)
    hi = mags[int(0.8 * C) :].mean()
    lo = mags[int(0.4 * C) : int(0.5 * C) + 1].mean()
    last = complex(shells[C])
    base = max(abs(last), hi)
    if base == 0.0:
        tail = 0.0
    elif lo <= 0.0 or hi <= 0.0:
        tail = math.inf
    else:
        decay = math.log(lo / hi) / math.log(2.0)  # window centers differ by x2
        tail = math.inf if decay <= 0 else 2.0 * base * C / max(1.0, decay - 1.0)
    return LValue(value, abs(pref) * tail if tail != math.inf else tail, pref * last)


def _a0_values(word_forms):
    return [complex(f.a0) for f in word_forms]


def _coeff_value(coeff, s0, a0s):
    for c in coeff.lin_den:
        if abs(s0 + complex(c)) < iterint.POLE_EPS:
            raise PoleError(f"pole divisor hit: s + {c} = 0")
    return coeff.evaluate(s0, a0s)


def evaluate_L_terms(tl, word_forms, s0: complex, config=None, force: bool = False) -> complex:
    """Numeric value of a TermList whose targets are multiple L-values."""
    cfg = config if config is not None else NumericsConfig()
    a0s = _a0_values(word_forms)
    cache = {}
    total = 0j
    for t in tl:
        args = tuple(identities.exp_at(a, s0) for a in t.target.args)
        key = (t.target.indices, args)
        if key not in cache:
            sub = tuple(word_forms[i] for i in t.target.indices)
            cache[key] = L_direct(LSpec(sub, args), cfg, force=force).value
        total += _coeff_value(t.coeff, s0, a0s) * cache[key]
    return total


def evaluate_I_terms(tl, word_forms, s0: complex, config=None) -> complex:
    """Numeric value of a TermList whose targets are iterated integrals."""
    cfg = config if config is not None else NumericsConfig()
    a0s = _a0_values(word_forms)
    cache = {}
    total = 0j
    for t in tl:
        args = tuple(identities.exp_at(a, s0) for a in t.target.args)
        key = (t.target.indices, args)
        if key not in cache:
            entries = [(word_forms[i], a) for i, a in zip(t.target.indices, args)]
            cache[key] = iterint.iterint_full(iterint.make_spec(entries), cfg)
        total += _coeff_value(t.coeff, s0, a0s) * cache[key]
    return total


def L_continued(forms, s: complex, alphas, config: NumericsConfig | None = None) -> complex:
    """Meromorphic continuation of L(f_1..f_n; s, a_2..a_n) to any s off the
    pole divisors, via the iterated-integral expansion."""
    tl = identities.thS_expand(list(forms), tuple(alphas))
    return evaluate_I_terms(tl, list(forms), complex(s), config)
