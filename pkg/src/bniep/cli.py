"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 infeasible (no supported
condition applies, or a verification fails).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import conditions as cond
from .constructors import construct, construct_auto, construct_soto
from .core import Spectrum, matrix_findings, verify_realization
from .diagonal import construct_diagonal
from .errors import BniepError, InfeasibleError
from .positive import construct_positive_borobia, positify
from .serialization import (certificate_to_dict, dumps, format_matrix, matrix_array_from_dict,
                            matrix_to_dict, parse_partition, parse_spectrum, parse_values)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2
DEFAULT_TOL = 1e-9
STRATEGIES = ("auto", "small", "suleimanova", "borobia", "soto", "diagonal", "positive")


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str
    spectra: list
    strategy: str = "auto"
    partition: Optional[list] = None
    diagonal: Optional[list] = None
    epsilon: Optional[float] = None
    soto_blocks: Optional[list] = None
    soto_b: Optional[list] = None
    matrix: Optional[object] = None
    tol: float = DEFAULT_TOL
    fmt: str = "text"
    output: Optional[str] = None
    precision: int = 6

    def validate(self):
        if self.strategy not in STRATEGIES:
            raise UsageError(f"unknown strategy {self.strategy!r}")
        if self.command == "construct":
            if self.strategy == "diagonal" and self.diagonal is None:
                raise UsageError("--strategy diagonal needs --diagonal")
            if self.strategy == "soto" and self.soto_blocks is None:
                raise UsageError("--strategy soto needs --soto-blocks")
        if self.command == "verify" and self.matrix is None:
            raise UsageError("verify needs --matrix")
        if not self.spectra:
            raise UsageError("no spectrum given")


def default_tol() -> float:
    env = os.environ.get("BNIEP_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError:
        raise UsageError(f"BNIEP_TOL={env!r} is not a number") from None


def _load_json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    return json.loads(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _verdicts_payload(verdicts) -> list:
    return [v.as_dict() for v in verdicts]


def do_check(s: Spectrum, cfg: JobConfig):
    verdicts = cond.evaluate_all(s)
    if cfg.partition is not None:
        verdicts.append(cond.check_borobia_bisym(s, cfg.partition))
    sufficient = [v for v in verdicts if v.holds and v.name not in cond.REFERENCE_ONLY]
    code = EXIT_OK if sufficient else EXIT_INFEASIBLE
    payload = {"spectrum": list(s.values), "realizable": bool(sufficient),
               "verdicts": _verdicts_payload(verdicts)}
    lines = [f"spectrum: {list(s.values)}"]
    for v in verdicts:
        tag = "holds" if v.holds else "fails"
        extra = f" (regime {v.regime})" if v.regime else ""
        why = f": {v.failed_clause}" if v.failed_clause else ""
        lines.append(f"  {v.name:<22} {tag}{extra}{why}")
    lines.append("bisymmetric realization guaranteed" if sufficient
                 else "no supported sufficient condition holds")
    return code, payload, "\n".join(lines)


def _build(s: Spectrum, cfg: JobConfig):
    st = cfg.strategy
    if st in ("auto", "small", "suleimanova", "borobia"):
        return construct(s, st, cfg.partition)
    if st == "diagonal":
        return construct_diagonal(s, cfg.diagonal)
    if st == "soto":
        return construct_soto(s, cfg.soto_blocks, cfg.soto_b)
    if st == "positive":
        if cfg.epsilon is None:
            return construct_positive_borobia(s, cfg.partition)
        shifted = Spectrum([s[0] - cfg.epsilon] + list(s.values[1:]))
        Q0, c0 = construct_auto(shifted)
        return positify(Q0, cfg.epsilon, c0)
    raise UsageError(f"unknown strategy {st!r}")


def do_construct(s: Spectrum, cfg: JobConfig):
    try:
        Q, cert = _build(s, cfg)
    except InfeasibleError as exc:
        payload = {"spectrum": list(s.values), "status": "infeasible", "message": str(exc),
                   "verdicts": _verdicts_payload(exc.verdicts),
                   "reference_conditions": _verdicts_payload(exc.reference)}
        lines = [f"infeasible: {exc}"]
        for v in exc.verdicts:
            lines.append(f"  {v.name:<22} {'holds' if v.holds else 'fails'}"
                         f"{': ' + v.failed_clause if v.failed_clause else ''}")
        for v in exc.reference:
            lines.append(f"  {v.name:<22} {'holds' if v.holds else 'fails'} "
                         "(reference only: implies a symmetric, not a bisymmetric, realization)")
        return EXIT_INFEASIBLE, payload, "\n".join(lines)
    rep = verify_realization(Q, s, cfg.tol)
    payload = {"spectrum": list(s.values), "status": "ok", "strategy": cfg.strategy,
               "matrix": matrix_to_dict(Q), "certificate": certificate_to_dict(cert),
               "report": rep.as_dict()}
    text = "\n".join([
        f"spectrum: {list(s.values)}",
        f"route: {' > '.join(cert.kinds()[:4])}",
        format_matrix(Q, cfg.precision),
        f"verification: {'pass' if rep.passed else 'FAIL'} (deviation "
        f"{rep.spectrum_deviation:.3e}, min entry {rep.min_entry:.3e}, tol {cfg.tol:g})",
    ])
    return (EXIT_OK if rep.passed else EXIT_INFEASIBLE), payload, text


def do_verify(s: Spectrum, cfg: JobConfig):
    a = matrix_array_from_dict(cfg.matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        raise UsageError(f"matrix must be square and non-empty (got shape {a.shape})")
    findings = matrix_findings(a, cfg.tol)
    if a.shape[0] != len(s):
        findings.append(f"order {a.shape[0]} does not match spectrum length {len(s)}")
        payload = {"spectrum": list(s.values), "findings": findings, "report": None}
        return EXIT_INFEASIBLE, payload, "\n".join(["verification: FAIL"] + findings)
    rep = verify_realization(a, s, cfg.tol)
    payload = {"spectrum": list(s.values), "findings": findings, "report": rep.as_dict()}
    lines = [f"verification: {'pass' if rep.passed else 'FAIL'}",
             f"  symmetric: {rep.is_symmetric}, persymmetric: {rep.is_persymmetric}",
             f"  min entry: {rep.min_entry:.6g}",
             f"  spectrum deviation: {rep.spectrum_deviation:.3e} (tol {cfg.tol:g})"]
    lines += [f"  finding: {f}" for f in findings]
    return (EXIT_OK if rep.passed else EXIT_INFEASIBLE), payload, "\n".join(lines)


COMMANDS = {"check": do_check, "construct": do_construct, "verify": do_verify}


def run(cfg: JobConfig, out=None) -> int:
    """Execute a job; writes to ``cfg.output`` or ``out`` (stdout by default)."""
    cfg.validate()
    fn = COMMANDS[cfg.command]
    results = [fn(s, cfg) for s in cfg.spectra]
    code = max(r[0] for r in results)
    if cfg.fmt == "json":
        payloads = [r[1] for r in results]
        body = dumps(payloads[0] if len(payloads) == 1 else payloads) + "\n"
    else:
        body = "\n\n".join(r[2] for r in results) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(body)
    else:
        (out or sys.stdout).write(body)
    return code


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bniep",
                                description="Nonnegative bisymmetric matrices with a prescribed spectrum.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--spectrum", help='eigenvalues, e.g. "9,2,-1,-2,-3,-4"')
        src.add_argument("--spectrum-file", help="file with one spectrum per line")
        sp.add_argument("--tol", type=float, default=None,
                        help=f"verification tolerance (default {DEFAULT_TOL:g} or $BNIEP_TOL)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--output", help="write to this file instead of stdout")
        sp.add_argument("--precision", type=int, default=6, help="decimals in text output")

    c = sub.add_parser("check", help="evaluate every sufficient condition")
    common(c)
    c.add_argument("--partition", help='blocks of the negative entries, e.g. "-2,-3,-4|-1"')

    k = sub.add_parser("construct", help="build a realizing matrix")
    common(k)
    k.add_argument("--strategy", choices=STRATEGIES, default="auto")
    k.add_argument("--partition", help='blocks of the negative entries, e.g. "-2,-3,-4|-1"')
    k.add_argument("--diagonal", help="a_0,a_1,...,a_m (centre outward) for --strategy diagonal")
    k.add_argument("--epsilon", type=float, help="Perron shift for --strategy positive")
    k.add_argument("--soto-blocks", help="JSON list (or file) of {values, omega[, matrix]}")
    k.add_argument("--soto-b", help="JSON S x S coupling matrix for --strategy soto")

    v = sub.add_parser("verify", help="check a matrix against a spectrum")
    common(v)
    v.add_argument("--matrix", required=True, help="matrix JSON file (or inline JSON)")
    return p


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    if ns.spectrum is not None:
        spectra = [parse_spectrum(ns.spectrum)]
    elif ns.spectrum_file is not None:
        with open(ns.spectrum_file) as fh:
            spectra = [parse_spectrum(line) for line in fh
                       if line.strip() and not line.lstrip().startswith("#")]
    else:
        raise UsageError("give --spectrum or --spectrum-file")
    cfg = JobConfig(command=ns.command, spectra=spectra, fmt=ns.format, output=ns.output,
                    precision=ns.precision, tol=ns.tol if ns.tol is not None else default_tol())
    if getattr(ns, "partition", None):
        cfg.partition = parse_partition(ns.partition)
    if ns.command == "construct":
        cfg.strategy = ns.strategy
        cfg.epsilon = ns.epsilon
        if ns.diagonal:
            cfg.diagonal = parse_values(ns.diagonal)
        if ns.soto_blocks:
            cfg.soto_blocks = _load_json_arg(ns.soto_blocks)
        if ns.soto_b:
            cfg.soto_b = _load_json_arg(ns.soto_b)
    if ns.command == "verify":
        cfg.matrix = _load_json_arg(ns.matrix)
    return cfg


_VALUE_OPTIONS = ("--spectrum", "--partition", "--diagonal")


def _attach_values(argv):
    """Glue ``--partition -2,-3`` into ``--partition=-2,-3`` so argparse does not
    mistake a leading minus sign for an option."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return run(config_from_args(ns))
    except (UsageError, BniepError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"bniep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
