"""Command-line surface.

Every subcommand produces a RunReport that is serialized as JSON (default)
or a delimited table.  Output for identical arguments and configuration is
byte-identical: floats are rounded to 15 significant digits, field order is
fixed, and the wall time goes to stderr, never into the payload.

Exit codes: 0 success, 1 domain or usage errors, 2 verification failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field

from . import forms, identities, iterint, lfun, mzv, qseries
from .config import NumericsConfig
from .errors import DomainError, ModiterError

__all__ = ["main", "run", "verify_suite", "RunReport"]

SUITES = ("eta", "funceq", "thi", "ths", "mzv", "shuffle")


@dataclass
class RunReport:
    subcommand: str
    inputs: dict
    config: dict
    values: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c["passed"])

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed


# --- deterministic serialization ----------------------------------------------

def _f15(x: float) -> float:
    return float(f"{float(x):.15g}")


def _pair(z) -> list:
    z = complex(z)
    return [_f15(z.real), _f15(z.imag)]


def _report_dict(r: RunReport) -> dict:
    return {
        "subcommand": r.subcommand,
        "inputs": r.inputs,
        "config": r.config,
        "values": r.values,
        "checks": r.checks,
        "data": r.data,
        "passed": r.passed,
        "failed": r.failed,
    }


def _emit(report: RunReport, output: str, stream) -> None:
    if output == "json":
        json.dump(_report_dict(report), stream, indent=2)
        stream.write("\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.checks:
        w.writerow(["name", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "diff", "tol", "passed"])
        for c in report.checks:
            lhs = c.get("lhs") or ["", ""]
            rhs = c.get("rhs") or ["", ""]
            w.writerow([c["name"], *lhs, *rhs, c["diff"], c["tol"], c["passed"]])
    elif report.values:
        w.writerow(["label", "re", "im", "err"])
        for v in report.values:
            w.writerow([v["label"], *v["value"], v["err"]])
    elif "coeffs" in report.data:
        w.writerow(["n", "coeff"])
        for n, c in enumerate(report.data["coeffs"]):
            w.writerow([n, c])
    stream.write(buf.getvalue())


def _value_entry(label: str, value, err: float) -> dict:
    return {"label": label, "value": _pair(value), "err": _f15(err)}


def _check_entry(name, diff, tol, lhs=None, rhs=None) -> dict:
    entry = {"name": name, "diff": _f15(diff), "tol": _f15(tol), "passed": diff <= tol}
    if lhs is not None:
        entry["lhs"] = _pair(lhs)
        entry["rhs"] = _pair(rhs)
    return entry


def _term_str(t) -> str:
    c = t.coeff
    parts = [] if c.rat == 1 else [str(c.rat)]

    def sp(g):
        return "s" if g == 0 else f"s+{g}"

    parts += [f"a0[{i}]" for i in c.a0_idx]
    parts += [f"Gamma({sp(g)})" for g in c.gamma_num]
    parts += [f"Gamma({sp(g)})^-1" for g in c.gamma_den]
    parts += [f"({sp(g)})" for g in c.lin_num]
    parts += [f"({sp(g)})^-1" for g in c.lin_den]
    kind = "L" if isinstance(t.target, identities.LTarget) else "I"
    idxs = ",".join(str(i) for i in t.target.indices)
    args = ", ".join(str(a) for a in t.target.args)
    parts.append(f"{kind}[{idxs}]({args})")
    return " * ".join(parts)


# --- argument handling ----------------------------------------------------------

class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_common(p: _Parser) -> None:
    p.add_argument("--order", type=int, default=None, help="q-expansion truncation order")
    p.add_argument("--height", type=float, default=None, help="height cutoff for i-infinity")
    p.add_argument("--panels", type=int, default=None, help="quadrature panels per segment")
    p.add_argument("--tol", type=float, default=None, help="target quadrature accuracy")
    p.add_argument("--cutoff", type=int, default=None, help="Dirichlet series cutoff")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument(
        "--form", action="append", default=[], metavar="PATH",
        help="coefficient file to load (repeatable); label becomes addressable",
    )


def _build_parser() -> _Parser:
    p = _Parser(prog="moditer", description="modular iterated integrals and multiple L-functions")
    sub = p.add_subparsers(dest="subcommand")

    q = sub.add_parser("qexp", help="print q-expansion coefficients")
    q.add_argument("name")

    e = sub.add_parser("eval", help="evaluate a form in the upper half-plane")
    e.add_argument("name")
    e.add_argument("--z", required=True, help="point, Python complex syntax (e.g. 0.5+1.2j)")

    lv = sub.add_parser("lvalue", help="multiple L-value by direct shell summation")
    lv.add_argument("names", nargs="+")
    lv.add_argument("--s", required=True, help="comma-separated argument list")
    lv.add_argument("--force", action="store_true", help="sum even without a convergence proof")

    it = sub.add_parser("iterint", help="iterated integral from i-infinity to 0")
    it.add_argument("names", nargs="+")
    it.add_argument("--s", required=True, help="comma-separated exponent list")

    mz = sub.add_parser("mzv", help="multiple zeta value")
    mz.add_argument("--index", required=True, help="comma-separated exponents, outer first")
    mz.add_argument("--method", choices=("series", "p1", "modular"), default="series")

    for name in ("thi-verify", "ths-verify", "funceq-verify", "eta-verify"):
        sub.add_parser(name, help=f"run the {name.split('-')[0]} verification suite")

    for sp in sub.choices.values():
        _add_common(sp)
    return p


def _config_from(ns) -> NumericsConfig:
    cfg = NumericsConfig()  # environment already folded in
    overrides = {
        k: getattr(ns, k)
        for k in ("order", "height", "panels", "tol", "cutoff")
        if getattr(ns, k, None) is not None
    }
    return cfg.replace(**overrides) if overrides else cfg


def _config_dict(cfg: NumericsConfig) -> dict:
    return {
        "order": cfg.order,
        "height": _f15(cfg.height),
        "panels": cfg.panels,
        "gl_order": cfg.gl_order,
        "tol": _f15(cfg.tol),
        "branch": cfg.branch,
        "cutoff": cfg.cutoff,
    }


def _registry(ns) -> dict:
    reg = {}
    for path in ns.form:
        f = forms.load_form(path)
        reg[f.label] = f
    return reg


def _resolve(name: str, reg: dict, order: int):
    if name in reg:
        return reg[name]
    try:
        return forms.builtin(name, order)
    except DomainError:
        raise DomainError(f"unknown form {name!r}; not loaded and not a builtin")


def _parse_complex(tok: str) -> complex:
    try:
        return complex(tok.replace("i", "j"))
    except ValueError:
        raise DomainError(f"cannot parse complex number {tok!r}")


def _parse_clist(text: str):
    return tuple(_parse_complex(tok) for tok in text.split(","))


# --- subcommand bodies -----------------------------------------------------------

def _coeff_native(c):
    f = float(c)
    return int(c) if f.is_integer() else _f15(f)


def _run_qexp(ns, cfg, reg) -> RunReport:
    f = _resolve(ns.name, reg, cfg.order)
    coeffs = [_coeff_native(c) for c in f.coeffs[: cfg.order + 1]]
    return RunReport(
        "qexp",
        {"name": ns.name, "order": cfg.order},
        _config_dict(cfg),
        data={"coeffs": coeffs, "level": f.level, "weight": f.weight},
    )


def _run_eval(ns, cfg, reg) -> RunReport:
    f = _resolve(ns.name, reg, max(cfg.order, 200))
    z = _parse_complex(ns.z)
    val = forms.evaluate_at(f, z)
    q = cmath.exp(2j * cmath.pi * z)
    err = abs(complex(f.coeffs[f.order])) * abs(q) ** f.order
    rep = RunReport("eval", {"name": ns.name, "z": ns.z}, _config_dict(cfg))
    rep.values.append(_value_entry(f"{ns.name}({ns.z})", val, err))
    return rep


def _run_lvalue(ns, cfg, reg) -> RunReport:
    svec = _parse_clist(ns.s)
    if len(svec) != len(ns.names):
        raise DomainError("need one argument per form")
    word = tuple(_resolve(n, reg, max(cfg.cutoff, cfg.order)) for n in ns.names)
    got = lfun.L_direct(lfun.LSpec(word, svec), cfg, force=ns.force)
    rep = RunReport(
        "lvalue",
        {"names": ns.names, "s": ns.s, "force": ns.force},
        _config_dict(cfg),
    )
    label = f"L({','.join(ns.names)}; {ns.s})"
    rep.values.append(_value_entry(label, got.value, got.tail_estimate))
    return rep


def _run_iterint(ns, cfg, reg) -> RunReport:
    svec = _parse_clist(ns.s)
    if len(svec) != len(ns.names):
        raise DomainError("need one exponent per form")
    word = [(_resolve(n, reg, cfg.order), s) for n, s in zip(ns.names, svec)]
    got = iterint.iterint_report(iterint.make_spec(word), cfg)
    rep = RunReport(
        "iterint", {"names": ns.names, "s": ns.s}, _config_dict(cfg)
    )
    label = f"I({','.join(ns.names)}; {ns.s})"
    rep.values.append(_value_entry(label, got.value, got.err_estimate))
    rep.data["divisors"] = list(got.divisors)
    return rep


def _run_mzv(ns, cfg, reg) -> RunReport:
    try:
        ks = tuple(int(tok) for tok in ns.index.split(","))
    except ValueError:
        raise DomainError(f"cannot parse index {ns.index!r}")
    idx = mzv.MzvIndex(ks)
    if ns.method == "series":
        val = mzv.mzv_series(idx, cfg.cutoff)
        err = abs(val - mzv.mzv_series(idx, max(16, cfg.cutoff // 2)))
    elif ns.method == "p1":
        val = mzv.mzv_p1_integral(idx, cfg)
        err = abs(val - mzv.p1_word_integral(mzv._word_flags(idx), cfg, eps=4e-10))
    else:
        val = mzv.mzv_modular_integral(idx, cfg)
        raw = mzv.modular_raw_integral(idx, cfg)
        err = abs(((2j * math.pi) ** idx.weight * 16**idx.depth * raw).imag) + cfg.tol * abs(val)
    rep = RunReport(
        "mzv", {"index": ns.index, "method": ns.method}, _config_dict(cfg)
    )
    rep.values.append(_value_entry(f"zeta({ns.index}) [{ns.method}]", val, err))
    return rep


# --- verification suites ----------------------------------------------------------

def _suite_eta(cfg) -> tuple:
    order = cfg.order
    f = qseries.builtin_form("F", order)
    g = qseries.builtin_form("G", order)
    e1 = qseries.eta_series(1, order)
    e2 = qseries.eta_series(2, order)
    e4 = qseries.eta_series(4, order)
    checks = []

    def exact(name, lhs, rhs):
        n = min(lhs.order, rhs.order)
        diff = float(max(abs(a - b) for a, b in zip(lhs.coeffs[: n + 1], rhs.coeffs[: n + 1])))
        if lhs.prefactor_num != rhs.prefactor_num:
            diff = math.inf
        checks.append(_check_entry(name, diff, 0.0))

    # F starts at q^1, so the quotient's prefactor must carry exactly q^{24/24}
    exact("F = eta(4z)^8 / eta(2z)^4", e4**8 / e2**4,
          qseries.QSeries(f.coeffs[1:], order - 1, 24))
    exact("G = eta(2z)^20 / (eta(z)^8 eta(4z)^8)", e2**20 / (e1**8 * e4**8), g)
    exact("G - 16F = eta(z)^8 / eta(2z)^4", e1**8 / e2**4, g - 16 * f)
    return checks, {}


def _suite_funceq(cfg) -> tuple:
    d = forms.builtin("delta", 400)
    checks = []
    for s in (5.0, 5.5, 6.5):
        lhs = iterint.completed_Z(iterint.make_spec([(d, s)]), cfg)
        rhs = cmath.exp(1j * cmath.pi * s) * iterint.completed_Z(
            iterint.make_spec([(d, 12 - s)]), cfg
        )
        checks.append(
            _check_entry(f"Z(delta; {s:g}) = e^(i pi s) Z(delta; {12 - s:g})",
                         abs(lhs - rhs) / max(1.0, abs(lhs)), 1e-6, lhs, rhs)
        )
    return checks, {}


def _rel_check(name, lhs, rhs, tol):
    return _check_entry(name, abs(lhs - rhs) / max(abs(rhs), 1e-300), tol, lhs, rhs)


def _suite_thi(cfg) -> tuple:
    checks = []
    d = forms.builtin("delta", max(cfg.cutoff, 2000))
    for s, alpha in ((16.0, 2), (15.0, 3)):
        tl = identities.thI_expand([d, d], (alpha,))
        via_L = lfun.evaluate_L_terms(tl, [d, d], s, cfg)
        direct = iterint.iterint_full(iterint.make_spec([(d, s), (d, float(alpha))]), cfg)
        checks.append(_rel_check(f"thi delta ({s:g},{alpha}) rel", direct, via_L, 1e-5))
    e4 = forms.builtin("E4", max(cfg.cutoff, 2000))
    tl = identities.thI_expand([e4, e4], (2,))
    via_L = lfun.evaluate_L_terms(tl, [e4, e4], 8.0, cfg)
    direct = iterint.iterint_full(iterint.make_spec([(e4, 8.0), (e4, 2.0)]), cfg)
    checks.append(_rel_check("thi E4 (8,2) rel", direct, via_L, 1e-4))
    return checks, {"terms": [_term_str(t) for t in tl]}


def _suite_ths(cfg) -> tuple:
    checks = []
    e4 = forms.builtin("E4", max(cfg.cutoff, 2000))
    tl = identities.thS_expand([e4, e4], (2,))
    via_I = lfun.evaluate_I_terms(tl, [e4, e4], 8.0, cfg)
    direct = lfun.L_direct(lfun.LSpec((e4, e4), (8.0, 2.0)), cfg).value
    checks.append(_rel_check("ths E4 (8,2) rel", via_I, direct, 1e-4))

    # round trip: I -> L-expansion, each L evaluated by its continuation
    d = forms.builtin("delta", 400)
    s = 9.0
    total = 0j
    a0s = [0.0, 0.0]
    for t in identities.thI_expand([d, d], (2,)):
        head = identities.exp_at(t.target.args[0], s)
        trailing = tuple(int(a) for a in t.target.args[1:])
        lval = lfun.L_continued([d, d], head, trailing, cfg)
        total += t.coeff.evaluate(s, a0s) * lval
    direct = iterint.iterint_full(iterint.make_spec([(d, s), (d, 2.0)]), cfg)
    checks.append(_rel_check("round trip delta (9,2) rel", direct, total, 1e-5))
    return checks, {"terms": [_term_str(t) for t in tl]}


def _suite_mzv(cfg) -> tuple:
    checks = []
    for ks, tol in (((2,), 1e-6), ((3,), 1e-6), ((2, 1), 1e-5)):
        idx = mzv.MzvIndex(ks)
        ref = mzv.mzv_series(idx)
        name = ",".join(map(str, ks))
        checks.append(
            _check_entry(f"zeta({name}) p1 vs series",
                         abs(mzv.mzv_p1_integral(idx, cfg) - ref), tol, ref, ref)
        )
        checks.append(
            _check_entry(f"zeta({name}) modular vs series",
                         abs(mzv.mzv_modular_integral(idx, cfg) - ref), tol, ref, ref)
        )
    return checks, {}


def _suite_shuffle(cfg) -> tuple:
    d = forms.builtin("delta", 300)
    rng = random.Random(2024)
    a, b = 1.5j, 0.35j
    checks = []
    for trial in range(5):
        k, l = rng.choice(((1, 1), (1, 2), (2, 1)))
        word1 = [(d, complex(rng.uniform(1, 3), rng.uniform(-1, 1))) for _ in range(k)]
        word2 = [(d, complex(rng.uniform(1, 3), rng.uniform(-1, 1))) for _ in range(l)]
        lhs = iterint.nested_quadrature(iterint.make_spec(word1), a, b, cfg) * \
            iterint.nested_quadrature(iterint.make_spec(word2), a, b, cfg)
        rhs = 0j
        for perm in iterint.shuffles(k, l):
            merged = [(word1 + word2)[i] for i in perm]
            rhs += iterint.nested_quadrature(iterint.make_spec(merged), a, b, cfg)
        checks.append(
            _check_entry(f"shuffle trial {trial} ({k},{l})", abs(lhs - rhs), 1e-8, lhs, rhs)
        )
    return checks, {}


_SUITE_FNS = {
    "eta": _suite_eta,
    "funceq": _suite_funceq,
    "thi": _suite_thi,
    "ths": _suite_ths,
    "mzv": _suite_mzv,
    "shuffle": _suite_shuffle,
}


def verify_suite(name: str, config: NumericsConfig | None = None) -> RunReport:
    if name not in _SUITE_FNS:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = config if config is not None else NumericsConfig()
    checks, data = _SUITE_FNS[name](cfg)
    return RunReport(f"{name}-verify", {"suite": name}, _config_dict(cfg),
                     checks=checks, data=data)


# --- dispatch ----------------------------------------------------------------------

def run(argv) -> tuple:
    """Parse and execute; returns (RunReport, exit_code, output_mode)."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.subcommand is None:
        raise _UsageError("a subcommand is required")
    cfg = _config_from(ns)
    reg = _registry(ns)
    if ns.subcommand.endswith("-verify"):
        report = verify_suite(ns.subcommand[: -len("-verify")], cfg)
    else:
        body = {
            "qexp": _run_qexp,
            "eval": _run_eval,
            "lvalue": _run_lvalue,
            "iterint": _run_iterint,
            "mzv": _run_mzv,
        }[ns.subcommand]
        report = body(ns, cfg, reg)
    return report, (2 if report.failed else 0), ns.output


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    t0 = time.perf_counter()
    try:
        report, code, output = run(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ModiterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report, output, sys.stdout)
    print(f"wall time: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
