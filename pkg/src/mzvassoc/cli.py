"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error (bad word syntax, divergent
word, argument out of range), 3 tolerance failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import acceptance, analytic, bases, kzode, negreg
from .ncpoly import AlphabetMismatch, NCPoly, pi1, shuffle, stuffle
from .ratexpr import UnsupportedExpression
from .words import WordError, format_word, lyndon_words, parse_word

PREC_ENV = "MZVASSOC_PREC"
EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ReportedFailure(Exception):
    """A complete report whose checks did not all pass (exit code 3)."""

    def __init__(self, report: dict):
        super().__init__("checks failed")
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


@dataclass
class CliConfig:
    prec: int = 50
    max_weight: int = 4
    tol: float = 1e-8
    format: str = "json"
    seed: int = 0


def _read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {raw.strip()}")
            key, value = (x.strip().strip('"') for x in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _resolve_config(args) -> CliConfig:
    cfg = CliConfig()
    if os.environ.get(PREC_ENV):
        cfg.prec = int(os.environ[PREC_ENV])
    if getattr(args, "config", None):
        for key, value in _read_config_file(args.config).items():
            if key not in CliConfig.__dataclass_fields__:
                raise UsageError(f"unknown config key {key!r}")
            kind = type(getattr(cfg, key))
            setattr(cfg, key, kind(value))
    for key in ("prec", "max_weight", "tol", "format", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if cfg.format not in ("json", "text"):
        raise UsageError("format must be json or text")
    return cfg


def _eval_cfg(cfg: CliConfig) -> analytic.EvalConfig:
    try:
        return analytic.EvalConfig(prec=cfg.prec, tolerance=min(cfg.tol, 10.0 ** -(cfg.prec - 10)))
    except ValueError as exc:
        raise analytic.DomainError(str(exc)) from exc


def _num(x, digits: int) -> str:
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False) if not isinstance(x, Fraction) else str(x)


def _bound(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 3)


def _word(text: str, alphabet=None):
    alpha, letters = parse_word(text, alphabet)
    return alpha, letters


# -- subcommand handlers -------------------------------------------------------------

def cmd_product(args, cfg):
    a1, u = _word(args.u, args.alphabet)
    a2, v = _word(args.v, args.alphabet or a1)
    alpha = args.alphabet or (a1 if a1 == a2 or not u else a2)
    if args.cmd == "stuffle" and alpha == "X":
        alpha = "Y"
    p, q = NCPoly.word(u, alpha), NCPoly.word(v, alpha)
    out = shuffle(p, q) if args.cmd == "shuffle" else stuffle(p, q)
    return out.to_json_obj()


def cmd_pi1(args, cfg):
    _, w = _word(args.word, "Y")
    return pi1(NCPoly.word(w, "Y")).to_json_obj()


def cmd_lyndon(args, cfg):
    alpha = args.alphabet.upper()
    return {"alphabet": alpha, "max_weight": cfg.max_weight,
            "words": [str(l) for l in lyndon_words(alpha, cfg.max_weight)]}


def cmd_basis(args, cfg):
    alpha = "X" if args.kind in ("P", "S") else "Y"
    _, w = _word(args.word, alpha)
    return bases.basis(args.kind, w).to_json_obj()


def cmd_li(args, cfg):
    _, w = _word(args.word, "X")
    ecfg = _eval_cfg(cfg)
    value, bound = analytic.li_eval(w, mpmath.mpf(args.z), ecfg, with_bound=True)
    return {"word": format_word("X", w), "z": args.z, "value": _num(value, cfg.prec), "error_bound": _bound(bound)}


def cmd_h(args, cfg):
    alpha, w = _word(args.word)
    if alpha == "X":
        if w:
            raise analytic.DomainError("h takes a word over Y or Y0")
        alpha = "Y"
    value = analytic.h_neg_eval(w, args.n) if alpha == "Y0" else analytic.h_eval(w, args.n)
    return {"word": format_word(alpha, w), "n": args.n, "value": str(value), "error_bound": "0"}


def cmd_zeta(args, cfg):
    alpha, w = _word(args.word)
    ecfg = _eval_cfg(cfg).with_(tolerance=cfg.tol)
    if alpha == "X":
        if not analytic.is_convergent_x(w):
            raise analytic.DivergentWord(f"divergent word {args.word}")
        from .words import decode_x
        w = decode_x(w)
    elif alpha == "Y0":
        raise analytic.DomainError("zeta takes a word over X or Y")
    value, bound = analytic.zeta_convergent(w, ecfg, with_bound=True)
    return {"word": format_word("Y", w), "value": _num(value, cfg.prec), "error_bound": _bound(bound)}


def cmd_negzeta(args, cfg):
    zs, g = negreg.neg_zeta(args.indices)
    return {"indices": args.indices, "zeta_sh": str(zs), "gamma": str(g)}


def cmd_rw(args, cfg):
    _, w = _word(args.word, "Y0")
    rec = negreg.NegIndexRecord.of(w)
    out = rec.to_json_obj()
    if args.stirling:
        _, rep = negreg.r_stirling_formula(w)
        out["stirling_check"] = rep.to_json_obj()
    return out


def cmd_upsilon(args, cfg):
    series = negreg.series_upsilon(cfg.max_weight)
    return {"max_weight": cfg.max_weight, "variable": "n",
            "terms": [{"word": format_word("Y", w), "polynomial": str(q), "coefficients": q.to_json_obj()}
                      for w, q in series.items()]}


def cmd_zminus(args, cfg):
    return negreg.zminus_report(cfg.max_weight)


def cmd_kz(args, cfg):
    ecfg = _eval_cfg(cfg)
    if args.action == "solve":
        z = float(args.z)
        return kzode.solve_de(z, cfg.max_weight, ecfg).to_json_obj()
    if args.action == "associator":
        probes = [float(x) for x in args.probes.split(",")]
        rep = kzode.associator_numeric(cfg.max_weight, probes, ecfg)
        if rep.max_spread > cfg.tol:
            raise ReportedFailure(rep.to_json_obj())
        return rep.to_json_obj()
    rep = kzode.bridge_check(cfg.max_weight, ecfg, tol=cfg.tol)
    if not rep.ok:
        raise ReportedFailure(rep.to_json_obj())
    return rep.to_json_obj()


def cmd_selftest(args, cfg):
    results = acceptance.run_all(quick=args.level == "quick")
    report = {"level": args.level, "passed": all(r.passed for r in results),
              "criteria": [r.to_json_obj() for r in results]}
    if not report["passed"]:
        raise ReportedFailure(report)
    return report


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--prec", type=int, help="working precision in digits (default 50)")
    common.add_argument("--max-weight", dest="max_weight", type=int, help="truncation weight (default 4)")
    common.add_argument("--tol", type=float, help="tolerance (default 1e-8)")
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="key=value configuration file")

    parser = _Parser(prog="mzvassoc", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    for name in ("shuffle", "stuffle"):
        p = sub.add_parser(name, parents=[common], help=f"{name} product of two words")
        p.add_argument("u")
        p.add_argument("v")
        p.add_argument("--alphabet", choices=("X", "Y", "Y0"))
        p.set_defaults(func=cmd_product)

    p = sub.add_parser("pi1", parents=[common], help="primitive projection of a Y word")
    p.add_argument("word")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("lyndon", parents=[common], help="Lyndon words up to a weight")
    p.add_argument("alphabet", choices=("X", "Y", "x", "y"))
    p.set_defaults(func=cmd_lyndon)

    p = sub.add_parser("basis", parents=[common], help="PBW basis element or its dual")
    p.add_argument("kind", choices=("P", "S", "Pi", "Sigma"))
    p.add_argument("word")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("li", parents=[common], help="polylogarithm Li_w(z)")
    p.add_argument("word")
    p.add_argument("--z", default="0.5")
    p.set_defaults(func=cmd_li)

    p = sub.add_parser("h", parents=[common], help="harmonic sum H_w(n) (Y0 words: H^-)")
    p.add_argument("word")
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(func=cmd_h)

    p = sub.add_parser("zeta", parents=[common], help="convergent multiple zeta value")
    p.add_argument("word")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("negzeta", parents=[common], help="regularized values at non-positive indices")
    p.add_argument("indices", type=int, nargs="+")
    p.set_defaults(func=cmd_negzeta)

    p = sub.add_parser("rw", parents=[common], help="the rational series R_w of a Y0 word")
    p.add_argument("word")
    p.add_argument("--stirling", action="store_true", help="also evaluate the closed Stirling formula")
    p.set_defaults(func=cmd_rw)

    p = sub.add_parser("upsilon", parents=[common], help="coefficients H_{pi_Y(R_w)}(n) as polynomials")
    p.set_defaults(func=cmd_upsilon)

    for name in ("zminus", "bridgeminus"):
        p = sub.add_parser(name, parents=[common], help="finite-part generating series Z^-")
        p.set_defaults(func=cmd_zminus)

    p = sub.add_parser("kz", parents=[common], help="KZ solver, associator and bridge")
    p.add_argument("action", choices=("solve", "associator", "bridge"))
    p.add_argument("--z", default="0.5")
    p.add_argument("--probes", default="0.3,0.5,0.7")
    p.set_defaults(func=cmd_kz)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("level", choices=("quick", "full"))
    p.set_defaults(func=cmd_selftest)
    return parser


def _render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_render_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}"
                         for v in obj)
    return f"{pad}{obj}"


def _emit(obj, cfg: CliConfig, stream) -> None:
    if cfg.format == "json":
        stream.write(json.dumps(obj, sort_keys=False) + "\n")
    else:
        stream.write(_render_text(obj) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve_config(args)
    except UsageError as exc:
        stderr.write(str(exc) + "\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        stderr.write(f"mzvassoc: {exc}\n")
        return EXIT_USAGE
    try:
        with mpmath.workdps(cfg.prec):
            result = args.func(args, cfg)
    except ReportedFailure as exc:
        _emit(exc.report, cfg, stdout)
        stderr.write("tolerance failure: see report\n")
        return EXIT_TOLERANCE
    except analytic.ToleranceError as exc:
        stderr.write(f"tolerance failure: {exc}\n")
        return EXIT_TOLERANCE
    except (analytic.DomainError, WordError, UnsupportedExpression, AlphabetMismatch) as exc:
        stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    _emit(result, cfg, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
