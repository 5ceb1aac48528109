"""Command line interface: `ellbound <subcommand> ...`.

Output is JSON (sorted keys) unless --output table is given.  Exit codes:
0 success, 1 an internal identity failed or a check was undecided,
2 domain error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from . import arith, elliptic, heights
from .errors import BudgetError, DomainError, EllboundError
from .exactnum import QQ, NumberField, parse_rational
from .ledger import ConstantsLedger, load_ledger


@dataclass
class RunConfig:
    ledger_path: Optional[str] = None
    precision_bits: int = 64
    normalization: str = "x_over_2"
    factor_budget_bits: int = arith.FACTOR_BUDGET_BITS
    digit_budget: int = elliptic.CONFIG.digit_budget
    scan_budget_log: float = elliptic.CONFIG.scan_budget_log
    output: str = "json"

    def __post_init__(self):
        if self.normalization not in elliptic.NORMALIZATIONS:
            raise DomainError(f"unknown normalization {self.normalization!r}")
        for name in ("precision_bits", "factor_budget_bits", "digit_budget", "scan_budget_log"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.output not in ("json", "table"):
            raise DomainError(f"unknown output format {self.output!r}")

    def ledger(self) -> ConstantsLedger:
        return load_ledger(self.ledger_path)

    def apply(self) -> None:
        arith.set_factor_budget(self.factor_budget_bits)
        heights.EMBEDDING_START_BITS = self.precision_bits
        elliptic.CONFIG.normalization = self.normalization
        elliptic.CONFIG.digit_budget = self.digit_budget
        elliptic.CONFIG.scan_budget_log = self.scan_budget_log


class IdentityFailure(EllboundError):
    """An exact identity that must hold did not."""


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _jsonable(obj):
    from .tower import TowerReal

    if isinstance(obj, TowerReal):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def _table(obj, indent: str = "") -> str:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.append(_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                lines.append(f"{indent}-")
                lines.append(_table(v, indent + "  "))
            else:
                lines.append(f"{indent}- {v}")
    else:
        lines.append(f"{indent}{obj}")
    return "\n".join(lines)


def emit(obj, cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    obj = _jsonable(obj)
    if cfg.output == "table":
        out.write(_table(obj) + "\n")
    else:
        out.write(json.dumps(obj, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------

def _parse_field(text: Optional[str]) -> NumberField:
    if not text:
        return QQ
    return NumberField(tuple(int(c) for c in text.split(",")))


def _parse_element(text: str, K: NumberField):
    """A rational, or [c0,c1,...] coordinates in the power basis of K."""
    text = text.strip()
    if text.startswith("["):
        return K([parse_rational(c) for c in text.strip("[]").split(",")])
    return K(parse_rational(text))


def _parse_points(E, texts):
    return [E.parse_point(t) for t in texts]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_height(args, cfg):
    from .heights import ProjectivePoint, height_breakdown

    K = _parse_field(args.field)
    P = ProjectivePoint([_parse_element(c, K) for c in args.coords], K)
    out = height_breakdown(P)
    if out["error"] == 0:
        out["error"] = "exact"
    out["field"] = list(K.min_poly)
    emit(out, cfg)
    return 0


def cmd_radical(args, cfg):
    from .heights import ProjectivePoint, radical

    K = _parse_field(args.field)
    P = ProjectivePoint([_parse_element(c, K) for c in args.coords], K)
    rad, S = radical(P)
    out = {"rad": rad, "S": S.primes, "error": "exact" if S.certified else "uncertified places"}
    if K.degree > 1:
        out["places"] = S.to_json()
    emit(out, cfg)
    return 0


def cmd_curve(args, cfg):
    from .bounds import bad_prime_proxy
    from .elliptic import Curve, h_x, height_difference_bound, is_torsion, scan_S_integral_points
    from .places import PlaceSet

    E = Curve.parse(args.curve)
    out = {
        "A": str(E.A.to_rational()),
        "B": str(E.B.to_rational()),
        "discriminant": str(E.discriminant.to_rational()),
        "bad_prime_proxy": bad_prime_proxy(E.A.to_rational(), E.B.to_rational()),
        "height_difference_bound": height_difference_bound(E),
    }
    if args.point:
        P = E.parse_point(args.point)
        info = {"point": P.to_json(), "h_x": h_x(P)}
        if args.mul is not None:
            info["multiple"] = (P * args.mul).to_json()
        v = is_torsion(P)
        info["torsion"] = v.torsion
        info["torsion_order"] = v.order
        out["point"] = info
    if args.add:
        P, Q = _parse_points(E, args.add)
        out["sum"] = (P + Q).to_json()
    if args.scan_cap is not None:
        primes = [int(p) for p in args.primes.split(",")] if args.primes else []
        S = PlaceSet.from_primes(QQ, primes)
        pts = scan_S_integral_points(E, S, args.scan_cap)
        out["scan"] = {"S": primes, "cap": args.scan_cap, "points": [P.to_json() for P in pts]}
    emit(out, cfg)
    return 0


def cmd_nt_height(args, cfg):
    from .elliptic import Curve, canonical_height_estimate

    E = Curve.parse(args.curve)
    P = E.parse_point(args.point)
    est = canonical_height_estimate(P, args.tol, cfg.normalization, n_max=args.n_max)
    emit({"value": est.value, "error": est.error_bound or args.tol, "steps": est.steps,
          "normalization": cfg.normalization}, cfg)
    return 0


def cmd_regulator(args, cfg):
    from .elliptic import Curve
    from .mwlattice import MWBasis, load_bases, minkowski_check, regulator

    if args.bases:
        records = [(rec, E, pts) for rec, E, pts in load_bases(args.bases)]
    else:
        if not args.curve:
            raise DomainError("give a curve and points, or --bases FILE")
        E = Curve.parse(args.curve)
        records = [({"curve": args.curve, "points": args.points}, E, _parse_points(E, args.points))]
    results = []
    for rec, E, pts in records:
        basis = MWBasis.from_points(E, pts, args.tol, cfg.normalization)
        reg = regulator(basis)
        entry = {"curve": rec["curve"], "basis": basis.to_json(), "regulator": reg.to_json()}
        if basis.rank >= 1:
            entry["minkowski"] = minkowski_check(basis).to_json()
        results.append(entry)
    emit(results if args.bases else results[0], cfg)
    return 0


def _heights_arg(text):
    return [float(h) for h in text.split(",")] if text else []


def cmd_bounds(args, cfg):
    from . import bounds as B

    L = cfg.ledger()
    which = args.which
    proxies: list[str] = []
    if which == "thm1":
        C = B.thm1_C_EK(args.r, args.d, args.logV, _heights_arg(args.heights), args.reg, L)
        full = B.thm1_full_bound(C, args.r, args.d, args.sigmaS, L)
        out = {"C_EK": B.bound_json(C, L), "bound": B.bound_json(full, L)}
    elif which == "rank":
        logN = args.logN
        if args.curve:
            from .elliptic import Curve

            E = Curve.parse(args.curve)
            logN = B.logN_F0_proxy(E.A.to_rational(), E.B.to_rational())
            logN = B.conductor_transfer(args.d, logN) if args.transfer else logN
            proxies.append(B.F0_PROXY_TAG)
        value = B.rank_bound(args.d, logN, args.logD)
        out = {"value": value, "kappas": list(B.rank_kappas(args.d)), "proxies_used": proxies,
               "ledger_hash": L.hash}
    elif which == "conductor-cap":
        out = {"cap": B.conductor_exponent_cap(args.p, args.e), "8e": 8 * args.e}
    elif which == "conductor-transfer":
        out = {"value": B.conductor_transfer(args.d, args.logN)}
    elif which == "lemma38":
        res = B.lemma38_bounds(args.d, args.logD, args.reg, args.r, L)
        out = {k: (B.bound_json(v, L) if hasattr(v, "level") else v) for k, v in res.items()}
        out["ledger_hash"] = L.hash
    elif which == "prop310":
        t = B.prop310_reg_bound(args.d, args.logD, args.logN, args.h_falt)
        out = B.bound_json(t, L, ["h = max(h_falt, e)"], h_used=max(args.h_falt, B.H_FALT_FLOOR))
    elif which == "lemma39":
        res = B.lemma39_bounds(args.d, args.logD, L)
        out = {k: B.bound_json(v, L) for k, v in res.items()}
    elif which == "thm34":
        out = B.bound_json(B.thm34_bound(args.d, args.logD, args.sigmaS, L), L)
    elif which == "thm42":
        t, b1, b2 = B.thm42_abc_bound(args.d, args.logD, args.rad, L)
        out = B.bound_json(t, L, beta1=b1, beta2=b2)
    elif which == "remark41":
        rows = B.remark41_report(args.r, args.d, args.sigmaS, args.rad, args.logD, L)
        if cfg.output == "table":
            sys.stdout.write(B.render_report(rows) + "\n")
            return 0
        out = {"rows": [row.to_json() for row in rows], "ledger_hash": L.hash}
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown bound {which}")
    emit(out, cfg)
    return 0


def verify_report(report: dict) -> str:
    """Human-readable audit of an end-to-end report."""
    from .bounds import ContributionRow, render_report

    t = report["triple"]
    lines = [f"triple ({t['a']}, {t['b']}, {t['c']}): rad = {t['rad']:.6g}, h = {t['h']:.6g}",
             f"L = Q[t]/({report['lift']['L']}), degree {report['lift']['degree']}",
             f"Q = {report['lift']['Q']}",
             f"Sigma_S' = {report['sigma_S_prime']:.6g}, log D_L bound = {report['lift']['logD_L_bound']:.6g}",
             f"rank proxy r = {report['rank_proxy']}",
             f"ledger {report['ledger_hash']}",
             "checks:"]
    for name, ok in report["checks"].items():
        lines.append(f"  [{'ok' if ok else 'FAIL'}] {name}")
    hb = report["height_bound"]
    lines.append(f"height bound: level {hb['level']}, log value {hb['log_value']:.6g}; proxies: "
                 + "; ".join(hb["proxies_used"]))
    ab = report["abc_bound"]
    lines.append(f"abc bound: exp({ab['log_value']:.6g}), beta1 = {ab['beta1']:.6g}, beta2 = {ab['beta2']:.6g}")
    rows = [ContributionRow(**row) for row in report["contributions"]]
    lines.append(render_report(rows))
    return "\n".join(lines)


def cmd_abc(args, cfg):
    from .abcpipe import abc_quality_scan, belyi_lift, build_triple, chevalley_weil_check, end_to_end_report, scan_jsonl

    if args.action == "scan":
        rows = abc_quality_scan(args.max, cfg.ledger())
        if cfg.output == "table":
            sys.stdout.write(f"{'a':>8} {'b':>8} {'c':>8} {'quality':>10} {'h':>10} {'rad':>10}\n")
            for r in rows:
                sys.stdout.write(f"{r['a']:>8} {r['b']:>8} {r['c']:>8} {r['quality']:>10.6f} "
                                 f"{r['h']:>10.6f} {r['rad']:>10.6f}\n")
        else:
            sys.stdout.write(scan_jsonl(rows))
        return 0
    if len(args.triple) != 3:
        raise DomainError("expected three numbers a b c")
    t = build_triple(*args.triple)
    S0 = [int(p) for p in args.s0.split(",")] if args.s0 else [2]
    if args.action == "lift":
        lift = belyi_lift(t, S0)
        cw = chevalley_weil_check(lift)
        out = lift.to_json()
        out["chevalley_weil"] = cw.to_json()
        emit(out, cfg)
        return 0 if cw.passed else 1
    report = end_to_end_report(t, cfg.ledger(), S0)
    if cfg.output == "table":
        sys.stdout.write(verify_report(report) + "\n")
    else:
        emit(report, cfg)
    return 0 if report["verified"] else 1


def cmd_selftest(args, cfg):
    from .selftest import run_selftest

    results = run_selftest()
    failed = [r for r in results if not r[1]]
    if cfg.output == "table":
        for name, ok, detail in results:
            sys.stdout.write(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}\n")
    else:
        emit({"passed": len(results) - len(failed), "failed": [r[0] for r in failed],
              "total": len(results)}, cfg)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

GLOBAL_DEFAULTS = {
    "ledger": None,
    "precision": 64,
    "normalization": "x_over_2",
    "budget_factor_bits": arith.FACTOR_BUDGET_BITS,
    "budget_digits": elliptic.CONFIG.digit_budget,
    "budget_scan": elliptic.CONFIG.scan_budget_log,
    "output": "json",
}


def _global_options() -> argparse.ArgumentParser:
    # defaults are suppressed so a flag given after the subcommand does not reset one given before it
    g = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    g.add_argument("--ledger", default=S, help="TOML constants ledger (default: $ELLBOUND_LEDGER, then built-in defaults)")
    g.add_argument("--precision", type=int, default=S, help="working precision in bits")
    g.add_argument("--normalization", choices=elliptic.NORMALIZATIONS, default=S)
    g.add_argument("--budget-factor-bits", type=int, default=S, help="largest integer size factored, in bits")
    g.add_argument("--budget-digits", type=int, default=S, help="coordinate digit budget for height doubling")
    g.add_argument("--budget-scan", type=float, default=S, help="largest log x-height the point scanner accepts")
    g.add_argument("--output", choices=("json", "table"), default=S)
    return g


def build_parser() -> argparse.ArgumentParser:
    glob = _global_options()
    p = argparse.ArgumentParser(prog="ellbound", parents=[glob],
                                description="Heights, places and explicit bounds for S-integral points and abc triples.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser(parents=[glob], name="height", help="absolute Weil height of (a_0 : ... : a_n)")
    s.add_argument("coords", nargs="+", help="rationals, or [c0,c1,...] with --field")
    s.add_argument("--field", help="minimal polynomial coefficients, low degree first")
    s.set_defaults(func=cmd_height)

    s = sub.add_parser(parents=[glob], name="radical", help="radical of (a : b : c)")
    s.add_argument("coords", nargs=3)
    s.add_argument("--field")
    s.set_defaults(func=cmd_radical)

    s = sub.add_parser(parents=[glob], name="curve", help="curve data, point operations and S-integral point scan")
    s.add_argument("curve", help="A,B")
    s.add_argument("--point", help="(x,y)")
    s.add_argument("--mul", type=int)
    s.add_argument("--add", nargs=2, metavar="P")
    s.add_argument("--primes", help="comma-separated primes of S")
    s.add_argument("--scan-cap", type=float, help="scan S-integral points with log x-height <= cap")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser(parents=[glob], name="nt-height", help="Neron-Tate height of a point")
    s.add_argument("curve")
    s.add_argument("point")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--n-max", type=int, default=None)
    s.set_defaults(func=cmd_nt_height)

    s = sub.add_parser(parents=[glob], name="regulator", help="Gram matrix, regulator and Minkowski check")
    s.add_argument("curve", nargs="?")
    s.add_argument("points", nargs="*")
    s.add_argument("--bases", help="JSON file of bases")
    s.add_argument("--tol", type=float, default=1e-6)
    s.set_defaults(func=cmd_regulator)

    s = sub.add_parser(parents=[glob], name="bounds", help="evaluate an explicit bound")
    s.add_argument("which", choices=("thm1", "rank", "conductor-cap", "conductor-transfer", "lemma38",
                                      "prop310", "lemma39", "thm34", "thm42", "remark41"))
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--logD", type=float, default=0.0)
    s.add_argument("--logN", type=float, default=0.0)
    s.add_argument("--sigmaS", type=float, default=0.0)
    s.add_argument("--rad", type=float, default=0.0)
    s.add_argument("--logV", type=float, default=math.e)
    s.add_argument("--heights", help="comma-separated canonical heights")
    s.add_argument("--reg", type=float, default=1.0)
    s.add_argument("--h-falt", type=float, default=0.0)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--e", type=int, default=1)
    s.add_argument("--curve", help="A,B: use the bad-prime proxy for log N(F0)")
    s.add_argument("--transfer", action="store_true", help="apply the 8 d log N conductor transfer")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser(parents=[glob], name="abc", help="abc pipeline")
    s.add_argument("action", choices=("lift", "scan", "report"))
    s.add_argument("triple", nargs="*")
    s.add_argument("--max", type=int, default=200)
    s.add_argument("--s0", help="comma-separated primes of S0 (default 2)")
    s.set_defaults(func=cmd_abc)

    s = sub.add_parser(parents=[glob], name="selftest", help="run the built-in example checks")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opts = {k: getattr(args, k, v) for k, v in GLOBAL_DEFAULTS.items()}
    try:
        cfg = RunConfig(opts["ledger"], opts["precision"], opts["normalization"], opts["budget_factor_bits"],
                        opts["budget_digits"], opts["budget_scan"], opts["output"])
        saved = (arith.FACTOR_BUDGET_BITS, replace(elliptic.CONFIG), heights.EMBEDDING_START_BITS)
        cfg.apply()
        try:
            return args.func(args, cfg)
        finally:
            arith.FACTOR_BUDGET_BITS = saved[0]
            heights.EMBEDDING_START_BITS = saved[2]
            for k, v in saved[1].__dict__.items():
                setattr(elliptic.CONFIG, k, v)
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return 2
    except BudgetError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return 3
    except EllboundError as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
