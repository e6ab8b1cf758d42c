"""Exact expansions connecting iterated integrals and multiple L-series.

Two directions, mirror images of each other:

  * thI_expand writes I(f_1..f_n; s, a_2..a_n) as a finite sum of
    Gamma-weighted multiple L-values of subwords (integer shifts in s).
  * thS_expand inverts: it writes L(f_1..f_n; s, a_2..a_n) as a sum of
    iterated integrals with rational-in-s coefficients, which is what gives
    the L-series its meromorphic continuation.

Coefficients stay exact (Fractions, Gamma shifts, linear factors s + c)
until a numeric evaluation is requested.  The binomial transforms that power
the two theorems are exposed separately; composing them is the identity,
which is the structural reason a round trip thS o thI collapses.

Exponent convention: the first slot carries the symbolic variable s (as
SPlus(offset) = s + offset); every other slot is a positive integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import scipy.special as _sp

from .errors import DomainError

__all__ = [
    "SPlus",
    "Coeff",
    "Composition",
    "JTuple",
    "LTarget",
    "ITarget",
    "Term",
    "TermList",
    "enumerate_indices",
    "coeff_A_B",
    "thI_expand",
    "thS_expand",
    "binom_transform_fwd",
    "binom_transform_inv",
]


@dataclass(frozen=True)
class SPlus:
    """The symbolic exponent s + off."""

    off: int

    def __add__(self, c):
        if isinstance(c, SPlus):
            raise DomainError("cannot add two symbolic exponents")
        return SPlus(self.off + int(c))

    __radd__ = __add__

    def at(self, s0: complex) -> complex:
        return s0 + self.off

    def __str__(self):
        return f"s+{self.off}" if self.off else "s"


def exp_at(e, s0: complex) -> complex:
    return e.at(s0) if isinstance(e, SPlus) else complex(e)


class JTuple(tuple):
    """Index tuple (j_2, ..., j_m) from one of the two transform families."""


@dataclass(frozen=True)
class Composition:
    """Shape of a word: gaps[r] constant slots precede the (r+1)-th form;
    the final entry counts trailing constants."""

    gaps: tuple

    @property
    def n_slots(self) -> int:
        return sum(self.gaps) + len(self.gaps) - 1

    @property
    def form_positions(self) -> tuple:
        pos, out = 0, []
        for g in self.gaps[:-1]:
            pos += g
            out.append(pos)
            pos += 1
        return tuple(out)


# --- exact coefficients ------------------------------------------------------

def _as_frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Coeff:
    """rat * prod Gamma(s+g)[gamma_num] / prod Gamma(s+g)[gamma_den]
           * prod (s+c)[lin_num] / prod (s+c)[lin_den] * prod a0[a0_idx].

    a0_idx holds 0-based word positions whose constant Fourier term
    multiplies the coefficient (repeats allowed)."""

    rat: Fraction = Fraction(1)
    gamma_num: tuple = ()
    gamma_den: tuple = ()
    lin_num: tuple = ()
    lin_den: tuple = ()
    a0_idx: tuple = ()

    def __mul__(self, other: "Coeff") -> "Coeff":
        return Coeff(
            self.rat * other.rat,
            self.gamma_num + other.gamma_num,
            self.gamma_den + other.gamma_den,
            self.lin_num + other.lin_num,
            self.lin_den + other.lin_den,
            tuple(sorted(self.a0_idx + other.a0_idx)),
        )

    def scaled(self, r) -> "Coeff":
        return Coeff(
            self.rat * _as_frac(r),
            self.gamma_num, self.gamma_den, self.lin_num, self.lin_den, self.a0_idx,
        )

    def shifted(self, c: int) -> "Coeff":
        """Substitute s -> s + c."""
        sh = lambda t: tuple(x + c for x in t)
        return Coeff(
            self.rat,
            sh(self.gamma_num), sh(self.gamma_den),
            sh(self.lin_num), sh(self.lin_den), self.a0_idx,
        )

    def evaluate(self, s0: complex, a0_values=()) -> complex:
        val = complex(self.rat)
        for g in self.gamma_num:
            val *= complex(_sp.gamma(s0 + g))
        for g in self.gamma_den:
            val /= complex(_sp.gamma(s0 + g))
        for c in self.lin_num:
            val *= s0 + complex(c)
        for c in self.lin_den:
            val /= s0 + complex(c)
        for i in self.a0_idx:
            val *= complex(a0_values[i])
        return val

    def as_ratfunc(self):
        """Canonical (numerator, denominator, gamma_power) with polynomials in
        s; Gamma(s+g) = Gamma(s) (s)(s+1)..(s+g-1) for integer g >= 0."""
        num, den, gpow = (Fraction(self.rat),), (Fraction(1),), 0
        for g in self.gamma_num:
            if g < 0:
                raise DomainError("negative Gamma shift has no polynomial form")
            gpow += 1
            for i in range(g):
                num = _poly_mul(num, (Fraction(i), Fraction(1)))
        for g in self.gamma_den:
            if g < 0:
                raise DomainError("negative Gamma shift has no polynomial form")
            gpow -= 1
            for i in range(g):
                den = _poly_mul(den, (Fraction(i), Fraction(1)))
        for c in self.lin_num:
            num = _poly_mul(num, (_as_frac(c), Fraction(1)))
        for c in self.lin_den:
            den = _poly_mul(den, (_as_frac(c), Fraction(1)))
        return num, den, gpow


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _poly_trim(a):
    i = len(a)
    while i > 1 and not a[i - 1]:
        i -= 1
    return tuple(a[:i])


def ratfunc_add(r1, r2):
    n1, d1 = r1
    n2, d2 = r2
    return _poly_trim(_poly_add(_poly_mul(n1, d2), _poly_mul(n2, d1))), _poly_mul(d1, d2)


def ratfunc_equal(r1, r2) -> bool:
    """Cross-multiplied exact equality; no factorization needed."""
    n1, d1 = r1
    n2, d2 = r2
    return _poly_trim(_poly_mul(n1, d2)) == _poly_trim(_poly_mul(n2, d1))


RATFUNC_ZERO = ((Fraction(0),), (Fraction(1),))
RATFUNC_ONE = ((Fraction(1),), (Fraction(1),))


# --- targets and term lists --------------------------------------------------

@dataclass(frozen=True)
class LTarget:
    """Multiple L-value of the subword at `indices` (0-based positions in the
    original word), argument vector `args`."""

    indices: tuple
    args: tuple


@dataclass(frozen=True)
class ITarget:
    """Iterated integral I_{i-inf}^0 of the subword at `indices`."""

    indices: tuple
    args: tuple


@dataclass(frozen=True)
class Term:
    coeff: Coeff
    target: object


@dataclass(frozen=True)
class TermList:
    terms: tuple

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def shifted(self, c: int) -> "TermList":
        """Substitute s -> s + c throughout (coefficients and arguments)."""

        def shift_args(args):
            return tuple(a + c if isinstance(a, SPlus) else a for a in args)

        out = []
        for t in self.terms:
            tgt = type(t.target)(t.target.indices, shift_args(t.target.args))
            out.append(Term(t.coeff.shifted(c), tgt))
        return TermList(tuple(out))

    def collected(self):
        """Exact rational function of s for each (target, a0 multiset,
        net Gamma(s) power) bucket."""
        buckets = {}
        for t in self.terms:
            num, den, gpow = t.coeff.as_ratfunc()
            key = (t.target, t.coeff.a0_idx, gpow)
            cur = buckets.get(key, RATFUNC_ZERO)
            buckets[key] = ratfunc_add(cur, (num, den))
        return buckets


# --- shared enumeration helpers ----------------------------------------------

def enumerate_indices(n: int, l: int, alphas=None):
    """Without alphas: all ways to distribute the n - l constant slots of a
    word around its l forms, as (l+1)-tuples of gap sizes.  With alphas
    (u_2..u_m): all index tuples (j_2..j_m) with the chained bounds
    0 <= j_k < u_k + j_{k+1}, rightmost first."""
    if alphas is None:
        if not 0 <= l <= n:
            raise DomainError("need 0 <= l <= n")
        out = []

        def gaps(rem, parts, acc):
            if parts == 1:
                out.append(tuple(acc) + (rem,))
                return
            for g in range(rem + 1):
                gaps(rem - g, parts - 1, acc + [g])

        gaps(n - l, l + 1, [])
        return out

    alphas = tuple(int(a) for a in alphas)
    if not alphas:
        return [JTuple()]
    out = []

    def rec(pos, j_next, acc):
        # pos walks the alphas right to left; acc collects reversed
        if pos < 0:
            out.append(JTuple(reversed(acc)))
            return
        for j in range(alphas[pos] + j_next):
            rec(pos - 1, j, acc + [j])

    # outermost loop is the rightmost index so tuples come out sorted by it
    last = len(alphas) - 1
    for j in range(alphas[last]):
        rec(last - 1, j, [j])
    return out


def coeff_A_B(composition: Composition, a0_values, s_vec):
    """Constant-term product A over the constant slots, and the trailing-fold
    factor B.  A word with m trailing constants folds them away at the cost
    of B = prod over k = 1..m of 1/(s_n + ... + s_{n-k+1})."""
    n = composition.n_slots
    if len(a0_values) != n or len(s_vec) != n:
        raise DomainError("a0_values and s_vec must match the composition size")
    forms_at = set(composition.form_positions)
    A = 1
    for i in range(n):
        if i not in forms_at:
            A = A * a0_values[i]
    B = 1
    acc = 0
    for k in range(composition.gaps[-1]):
        acc = acc + s_vec[n - 1 - k]
        B = B / acc
    return A, B


def _word_exponents(n: int, alphas) -> list:
    if len(alphas) != n - 1:
        raise DomainError(f"need {n - 1} integer exponents for a word of {n} forms")
    for a in alphas:
        if int(a) != a or a < 1:
            raise DomainError("integer exponents must be >= 1")
    return [SPlus(0)] + [int(a) for a in alphas]


# --- the L-from-I expansion ----------------------------------------------------

def thI_expand(forms, alphas) -> TermList:
    """I(f_1..f_n; s, a_2..a_n) as a TermList of LTargets.

    Each nonempty subset D of slots keeps its cuspidal part; the rest
    contribute their constant terms (terms with A = 0 are dropped).  Trailing
    constants fold into a rational B-factor, leading and internal ones are
    absorbed by the index sums below.
    """
    n = len(forms)
    exps = _word_exponents(n, alphas)
    a0s = [f.a0 for f in forms]
    terms = []
    for r in range(1, n + 1):
        for D in combinations(range(n), r):
            if any(a0s[i] == 0 for i in range(n) if i not in D):
                continue
            a0_idx = tuple(i for i in range(n) if i not in D)
            last = D[-1]
            B = Fraction(1)
            acc = 0
            for t in range(n - 1 - last):
                acc += exps[n - 1 - t]
                B /= acc
            # folded word: slots 0..last, trailing exponents merged into last
            u = list(exps[: last + 1])
            tail = sum(exps[last + 1 :]) if last + 1 < n else 0
            u[last] = u[last] + tail
            L = last + 1
            if L == 1:
                off = u[0].off
                terms.append(
                    Term(
                        Coeff(rat=-B, gamma_num=(off,), a0_idx=a0_idx),
                        LTarget((D[0],), (SPlus(off),)),
                    )
                )
                continue
            sign = Fraction(-1) ** L
            for J in enumerate_indices(0, 0, alphas=u[1:]):
                j = (None, None) + tuple(J)  # j[k] for k = 2..L
                binom = 1
                rat = sign * B
                v = [None, None]  # v[k] for k = 2..L
                for k in range(2, L + 1):
                    j_next = j[k + 1] if k + 1 <= L else 0
                    binom *= math.comb(u[k - 1] + j_next - 1, j[k])
                    vk = u[k - 1] - j[k] + j_next
                    v.append(vk)
                    rat *= math.factorial(vk - 1)  # Gamma(v_k), exact
                rat *= binom
                # argument vector: v-sums between consecutive kept slots
                pos = [p + 1 for p in D]  # 1-based positions in folded word
                args = []
                first = SPlus(j[2] + sum(v[k] for k in range(2, pos[0] + 1)))
                args.append(first)
                for a, b in zip(pos, pos[1:]):
                    args.append(sum(v[k] for k in range(a + 1, b + 1)))
                terms.append(
                    Term(
                        Coeff(rat=rat, gamma_num=(j[2],), a0_idx=a0_idx),
                        LTarget(D, tuple(args)),
                    )
                )
    return TermList(tuple(terms))


# --- the I-from-L expansion (continuation) -------------------------------------

def _by_parts(word, coeff, out):
    """Eliminate constant slots of an i-infinity-to-0 word.

    word: list of (orig_index or None, exponent).  A leading constant slot
    merges its exponent into the next slot at the cost of -1/(s + c); an
    internal one splits into merges with both neighbours, +1/m and -1/m.
    Boundary contributions vanish at the cusps.
    """
    for p, (idx, e) in enumerate(word):
        if idx is None:
            break
    else:
        out.append((coeff, word))
        return
    e = word[p][1]
    if p == 0:
        nxt_idx, nxt_e = word[1]
        rest = [(nxt_idx, e + nxt_e)] + word[2:]
        c = coeff.scaled(-1)
        c = Coeff(c.rat, c.gamma_num, c.gamma_den, c.lin_num, c.lin_den + (e.off,), c.a0_idx)
        _by_parts(rest, c, out)
        return
    left_idx, left_e = word[p - 1]
    left = word[: p - 1] + [(left_idx, left_e + e)] + word[p + 1 :]
    _by_parts(left, coeff.scaled(Fraction(1, e)), out)
    right_idx, right_e = word[p + 1]
    right = word[:p] + [(right_idx, right_e + e)] + word[p + 2 :]
    _by_parts(right, coeff.scaled(Fraction(-1, e)), out)


def thS_expand(forms, alphas) -> TermList:
    """L(f_1..f_n; s, a_2..a_n) as a TermList of ITargets with coefficients
    rational in s: the meromorphic continuation of the multiple L-series.

    The index sums here use the independent bounds 0 <= j_k < a_k with
    alternating binomials; constant-term subsets and by-parts elimination of
    the remaining constant slots reduce everything to honest iterated
    integrals of the input forms.
    """
    n = len(forms)
    exps = _word_exponents(n, alphas)
    a0s = [f.a0 for f in forms]
    al = [None, None] + [int(a) for a in alphas]  # al[k] for k = 2..n
    raw = []

    jspace = [range(a) for a in al[2:]] if n > 1 else [()]
    jtuples = list(product(*jspace)) if n > 1 else [()]
    for J in jtuples:
        j = (None, None) + tuple(J)
        rat = Fraction(1)
        w = [SPlus(0) for _ in range(1)] + [0] * (n - 1)
        if n > 1:
            w[0] = SPlus(j[2])
            for k in range(2, n + 1):
                j_next = j[k + 1] if k + 1 <= n else 0
                rat *= Fraction(-1) ** j[k] * math.comb(al[k] - 1, j[k])
                w[k - 1] = al[k] - j[k] + j_next
        # cusp parts f0 = f - a0: keep a subset T of full forms
        for r in range(1, n + 1):
            for T in combinations(range(n), r):
                if any(a0s[i] == 0 for i in range(n) if i not in T):
                    continue
                sgn = Fraction(-1) ** (n - r)
                a0_idx = tuple(i for i in range(n) if i not in T)
                lastf = T[-1]
                B = Fraction(1)
                acc = 0
                for t in range(n - 1 - lastf):
                    acc += w[n - 1 - t]
                    B /= acc
                word = []
                for i in range(lastf + 1):
                    e = w[i]
                    if i == lastf:
                        e = e + (sum(w[lastf + 1 :]) if lastf + 1 < n else 0)
                    word.append((i if i in T else None, e))
                base = Coeff(rat=rat * sgn * B, a0_idx=a0_idx)
                _by_parts(word, base, raw)

    # divide by Gamma^{(s, a.)} = (-1)^n Gamma(s) prod Gamma(a_k)
    scale = Fraction(-1) ** n
    for k in range(2, n + 1):
        scale *= math.factorial(al[k] - 1)
    terms = []
    for coeff, word in raw:
        c = Coeff(
            coeff.rat / scale,
            coeff.gamma_num,
            coeff.gamma_den + (0,),
            coeff.lin_num,
            coeff.lin_den,
            coeff.a0_idx,
        )
        indices = tuple(i for i, _ in word)
        args = tuple(e for _, e in word)
        terms.append(Term(c, ITarget(indices, args)))
    return TermList(tuple(terms))


# --- binomial transform pair ---------------------------------------------------

def binom_transform_fwd(data: dict) -> dict:
    """Forward family: coefficients prod C(a_k + j_{k+1} - 1, j_k) z^{j_2},
    chained bounds.  data maps (zpow, alphas) -> Fraction."""
    out = {}
    for (zpow, alphas), c in data.items():
        if not alphas:
            out[(zpow, alphas)] = out.get((zpow, alphas), Fraction(0)) + c
            continue
        m = len(alphas)
        for J in enumerate_indices(0, 0, alphas=alphas):
            w = Fraction(1)
            new = []
            for k in range(m):
                j_next = J[k + 1] if k + 1 < m else 0
                w *= math.comb(alphas[k] + j_next - 1, J[k])
                new.append(alphas[k] - J[k] + j_next)
            key = (zpow + J[0], tuple(new))
            out[key] = out.get(key, Fraction(0)) + c * w
    return {k: v for k, v in out.items() if v}


def binom_transform_inv(data: dict) -> dict:
    """Inverse family: coefficients prod (-1)^{j_k} C(a_k - 1, j_k) z^{j_2},
    independent bounds 0 <= j_k < a_k."""
    out = {}
    for (zpow, alphas), c in data.items():
        if not alphas:
            out[(zpow, alphas)] = out.get((zpow, alphas), Fraction(0)) + c
            continue
        m = len(alphas)
        for J in product(*[range(a) for a in alphas]):
            w = Fraction(1)
            new = []
            for k in range(m):
                j_next = J[k + 1] if k + 1 < m else 0
                w *= Fraction(-1) ** J[k] * math.comb(alphas[k] - 1, J[k])
                new.append(alphas[k] - J[k] + j_next)
            key = (zpow + J[0], tuple(new))
            out[key] = out.get(key, Fraction(0)) + c * w
    return {k: v for k, v in out.items() if v}
