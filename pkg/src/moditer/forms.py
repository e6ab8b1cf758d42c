"""Modular forms as finite q-expansions: evaluation on the upper half-plane,
cuspidal decomposition f = f0 + a0, Fricke reflection, and JSON ingestion.

Coefficients are trusted metadata; no modularity is verified.  Built-ins
carry their Fricke companion series so integrals can be reflected without
evaluating q-expansions at small Im z.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import qseries
from .config import NumericsConfig
from .errors import DomainError, TruncationError
from .kernels import horner_many

__all__ = [
    "ModularForm",
    "builtin",
    "cusp_part",
    "evaluate_at",
    "evaluate_at_with_tail",
    "evaluate_many",
    "fricke_evaluate",
    "fricke_companion",
    "load_form",
    "save_form",
]


@dataclass(frozen=True)
class ModularForm:
    level: int
    weight: int
    label: str
    coeffs: tuple  # a_0 .. a_M, int | Fraction | float | complex
    chi: str = "trivial"
    # companion series g with g(z) = N^{-k/2} z^{-k} f(-1/(Nz)); wired for
    # built-ins, settable on ingested forms; excluded from equality/hash to
    # keep the mutual references finite.
    fricke: "ModularForm | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.level < 1:
            raise DomainError("level must be a positive integer")
        if not self.coeffs:
            raise DomainError("coefficient list must be nonempty")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def a0(self):
        return self.coeffs[0]

    @property
    def is_cuspidal(self) -> bool:
        return not self.coeffs[0]

    def _np_coeffs(self):
        cached = _NP_CACHE.get(id(self))
        if cached is None or cached[0] is not self:
            arr = np.array([complex(c) for c in self.coeffs], dtype=complex)
            arr.setflags(write=False)
            _NP_CACHE[id(self)] = (self, arr)
            cached = (self, arr)
        return cached[1]


_NP_CACHE: dict = {}


def _set_fricke(f: ModularForm, g: ModularForm):
    object.__setattr__(f, "fricke", g)


def from_qseries(qs: qseries.QSeries, level: int, weight: int, label: str) -> ModularForm:
    if qs.prefactor_num % 24:
        raise DomainError("series with fractional q-powers is not a form on Gamma_0(N)")
    shift = qs.prefactor_num // 24
    coeffs = (0,) * shift + qs.coeffs
    return ModularForm(level, weight, label, tuple(coeffs))


def builtin(name: str, order: int) -> ModularForm:
    """Built-in form with its Fricke companion attached.

    Level 4: F, G (= theta4); level 1: delta and E<k>.  Companions follow
    from theta(-1/(4z)) = sqrt(-2iz) theta(z): G-tilde = -G and
    F-tilde = F - G/16; level-1 forms are self-companion (weight even).
    """
    if name in ("F", "G", "theta4"):
        f = from_qseries(qseries.builtin_form("F", order), 4, 2, "F")
        g = from_qseries(qseries.builtin_form("G", order), 4, 2, "G")
        ft = ModularForm(4, 2, "F|w4", tuple(
            Fraction(a) - Fraction(b, 16) for a, b in zip(f.coeffs, g.coeffs)
        ))
        gt = ModularForm(4, 2, "G|w4", tuple(-b for b in g.coeffs))
        _set_fricke(f, ft)
        _set_fricke(ft, f)
        _set_fricke(g, gt)
        _set_fricke(gt, g)
        return g if name in ("G", "theta4") else f
    if name == "delta" or (name.startswith("E") and name[1:].isdigit()):
        qs = qseries.builtin_form(name, order)
        weight = 12 if name == "delta" else int(name[1:])
        f = from_qseries(qs, 1, weight, name)
        _set_fricke(f, f)  # level 1, even weight: f|w1 = f
        return f
    raise DomainError(f"unknown built-in form {name!r}")


def cusp_part(f: ModularForm) -> ModularForm:
    """f0 = f - a0: the same form with its constant term zeroed."""
    if f.is_cuspidal:
        return f
    g = ModularForm(f.level, f.weight, f.label + "^0", (0,) + f.coeffs[1:], f.chi)
    return g


def _tail_bound(f: ModularForm, y: float) -> float:
    # last nonzero coefficient; the literal a_M would understate sparse tails
    for j in range(f.order, -1, -1):
        if f.coeffs[j]:
            return abs(complex(f.coeffs[j])) * float(np.exp(-2 * np.pi * j * y))
    return 0.0


def evaluate_at_with_tail(f: ModularForm, z: complex, config: NumericsConfig | None = None):
    """(value, heuristic tail bound |a_j| e^{-2 pi j Im z} at the last stored term)."""
    if z.imag <= 0:
        raise DomainError("evaluation requires Im z > 0")
    q = cmath.exp(2j * cmath.pi * z)
    acc = 0j
    for c in reversed(f.coeffs):
        acc = acc * q + complex(c)
    return acc, _tail_bound(f, z.imag)


def evaluate_at(f: ModularForm, z: complex, config: NumericsConfig | None = None) -> complex:
    cfg = config if config is not None else NumericsConfig()
    value, tail = evaluate_at_with_tail(f, z, cfg)
    if tail > cfg.tol:
        raise TruncationError(
            f"tail bound {tail:.3e} at Im z = {z.imag:.4g} exceeds tolerance "
            f"{cfg.tol:.1e}; raise the order or reflect toward i*infinity"
        )
    return value


def evaluate_many(f: ModularForm, zs: np.ndarray) -> np.ndarray:
    """Vectorized q-expansion evaluation (no tail policing; quadrature paths
    are kept inside the trusted region by construction)."""
    q = np.exp(2j * np.pi * np.asarray(zs, dtype=complex))
    return horner_many(f._np_coeffs(), q)


def fricke_evaluate(f: ModularForm, z: complex, config: NumericsConfig | None = None) -> complex:
    """f|omega_N at z: N^{-k/2} z^{-k} f(-1/(Nz))."""
    if f.chi != "trivial":
        raise DomainError("Fricke reflection implemented for trivial character only")
    if z.imag <= 0:
        raise DomainError("Fricke evaluation requires Im z > 0")
    w = -1.0 / (f.level * z)
    inner = evaluate_at(f, w, config)
    return f.level ** (-f.weight / 2.0) * z ** (-f.weight) * inner


def fricke_companion(f: ModularForm) -> ModularForm:
    if f.fricke is None:
        raise DomainError(
            f"form {f.label!r} has no Fricke companion series attached; "
            "needed to reflect integrals through i/sqrt(N)"
        )
    return f.fricke


# ------------------------------------------------------------ serialization

def _decode_coeff(c):
    if isinstance(c, (int, float)):
        return c
    if isinstance(c, list) and len(c) == 2 and all(isinstance(t, (int, float)) for t in c):
        return complex(c[0], c[1])
    raise DomainError(f"bad coefficient entry {c!r}: expected number or [re, im]")


def _encode_coeff(c):
    if isinstance(c, complex):
        return [c.real, c.imag]
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else float(c)
    return c


def load_form(path) -> ModularForm:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read form file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"cannot parse form file {path}: {exc}") from exc
    for key in ("level", "weight", "coeffs"):
        if key not in data:
            raise DomainError(f"form file {path} missing field {key!r}")
    coeffs = data["coeffs"]
    if not isinstance(coeffs, list) or not coeffs:
        raise DomainError(f"form file {path} has an empty coefficient list")
    return ModularForm(
        int(data["level"]),
        int(data["weight"]),
        str(data.get("label", "ingested")),
        tuple(_decode_coeff(c) for c in coeffs),
        str(data.get("chi", "trivial")),
    )


def save_form(f: ModularForm, path) -> None:
    data = {
        "level": f.level,
        "weight": f.weight,
        "label": f.label,
        "chi": f.chi,
        "coeffs": [_encode_coeff(c) for c in f.coeffs],
    }
    with open(path, "w") as fh:
        json.dump(data, fh)
        fh.write("\n")
