"""Command-line harness.

Every command prints a human-readable section, a ``---`` line, then a flat
``key: value`` block with numbers at 17 significant digits. Only the human
section carries timing, so the machine block is reproducible byte for byte.

Exit codes: 0 pass, 1 property failure, 2 parse error, 3 invariant violation.
"""
import argparse
import hashlib
import os
import sys
import time

import numpy as np

from . import _tol
from .conclusive import (
    ORTHOGONAL, RegimeError, conclusive_global, conclusive_local_orthogonal_regime,
    conclusive_local_product, conclusive_local_search, simulate_alice_then_bob,
)
from .fileio import InvariantError, ParseError, format_certificate, format_ensemble, parse_ensemble
from .helstrom import helstrom
from .linalg import PreconditionError
from .protocol import to_text
from .schmidt_corr import InconsistencyError, any_figure_of_merit_check, schmidt_correlate
from .states import StructureError, product_factors, to_state_matrix
from .suite import CRITERIA, run_criterion
from .walgate import local_protocol_2dspan, local_protocol_optimal

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3
GAP_TOL = 1e-9


class Report:
    def __init__(self, command):
        self.human = []
        self.fields = [("command", command)]

    def say(self, line):
        self.human.append(line)

    def put(self, key, value):
        self.fields.append((key, value))

    def render(self) -> str:
        def fmt(v):
            if isinstance(v, bool):
                return str(v).lower()
            if isinstance(v, (float, np.floating)):
                return format(float(v), ".17g")
            if isinstance(v, (complex, np.complexfloating)):
                return f"{format(v.real, '.17g')},{format(v.imag, '.17g')}"
            if isinstance(v, np.ndarray):
                return " ".join(fmt(x) for x in v)
            return str(v)

        machine = [f"{k}: {fmt(v)}" for k, v in self.fields]
        return "\n".join(self.human + ["---"] + machine) + "\n"


def _digest(e) -> str:
    return hashlib.sha256(format_ensemble(e).encode()).hexdigest()[:16]


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(0, f"cannot read {path}: {exc.strerror}") from None
    return parse_ensemble(text)


def _write(out, name, text):
    if out is None:
        return "none"
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _verdict(rep, gap, tol):
    ok = bool(gap <= tol)
    rep.put("gap", gap)
    rep.put("tolerance", tol)
    rep.put("verdict", "pass" if ok else "fail")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_helstrom(args, rep):
    e = _load(args.ensemble)
    res = helstrom(e)
    rep.say(f"Helstrom minimum error for {args.ensemble}: P_E = {res.error_probability:.12g}")
    rep.put("digest", _digest(e))
    rep.put("figure", "min-error")
    rep.put("global", res.error_probability)
    if res.plus is not None:
        rep.say("projector basis |+>, |-> written below (amplitudes re,im)")
        rep.put("plus", res.plus)
        rep.put("minus", res.minus)
    rep.put("verdict", "pass")
    return EXIT_PASS


def _local_min_error(args, e, rep):
    tol = _tol.rel(GAP_TOL)
    if e.is_pure:
        protocol, local = local_protocol_optimal(e)
    elif args.mixed_2d:
        protocol, local = local_protocol_2dspan(e)
    else:
        raise PreconditionError("mixed states need --mixed-2d (joint support of dimension 2)")
    global_ = helstrom(e).error_probability
    rep.put("global", global_)
    rep.put("local", local)
    rep.put("artifact", _write(args.out, "protocol.txt", to_text(protocol)))
    rep.say(f"global P_E {global_:.12g}, LOCC P_E {local:.12g} ({protocol.depth()} rounds)")
    return _verdict(rep, abs(global_ - local), tol)


def _local_conclusive(args, e, rep):
    tol = _tol.rel(GAP_TOL)
    g = conclusive_global(e)
    rep.put("regime", g.regime)
    rep.put("global", g.success_probability)
    rep.say(f"global conclusive success {g.success_probability:.12g} ({g.regime} regime)")
    artifact = "none"
    found = True
    if g.regime == ORTHOGONAL:
        protocol, stats = conclusive_local_orthogonal_regime(e)
        artifact = _write(args.out, "protocol.txt", to_text(protocol))
        method = "projective"
    elif abs(e.p1 - e.p2) <= 1e-12 and product_factors(e.state1) and product_factors(e.state2):
        stats = conclusive_local_product(e)
        method = "product"
    elif abs(e.p1 - e.p2) <= 1e-12 and e.dims == (2, 2):
        strat = conclusive_local_search(e)
        stats = simulate_alice_then_bob(e, strat.chi, strat.chi_perp)
        artifact = _write(args.out, "strategy.txt", _strategy_text(strat))
        method = "search"
        found = strat.found
        rep.put("found", found)
        if not found:
            rep.say("warning: search found no Alice basis reaching the global value")
    else:
        rep.say("warning: local achievement unsupported for this prior/state combination")
        rep.put("method", "none")
        rep.put("warning", "local achievement unsupported")
        rep.put("artifact", artifact)
        rep.put("verdict", "pass")
        return EXIT_PASS
    rep.put("method", method)
    rep.put("local", stats.success)
    rep.put("min_posterior", stats.min_posterior)
    rep.put("artifact", artifact)
    rep.say(f"local conclusive success {stats.success:.12g} via {method} protocol")
    if 1 - stats.min_posterior > tol:
        rep.put("verdict", "fail")
        rep.say("a conclusive outcome mislabels")
        return EXIT_FAIL
    if not found:
        rep.put("gap", abs(g.success_probability - stats.success))
        rep.put("warning", "local optimum not found")
        rep.put("verdict", "pass")
        return EXIT_PASS
    return _verdict(rep, abs(g.success_probability - stats.success), tol)


def _strategy_text(strat):
    def vec(v):
        return " ".join(f"{format(z.real, '.17g')},{format(z.imag, '.17g')}" for z in v)

    return (f"chi: {vec(strat.chi)}\nchi_perp: {vec(strat.chi_perp)}\n"
            f"local: {format(strat.local_success, '.17g')}\nfound: {str(strat.found).lower()}\n")


def cmd_local(args, rep):
    e = _load(args.ensemble)
    rep.put("digest", _digest(e))
    rep.put("figure", args.figure)
    if args.figure == "min-error":
        return _local_min_error(args, e, rep)
    return _local_conclusive(args, e, rep)


def cmd_conclusive_search(args, rep):
    e = _load(args.ensemble)
    strat = conclusive_local_search(e)
    rep.put("digest", _digest(e))
    rep.put("chi", strat.chi)
    rep.put("constraint_residual", strat.constraint_residual)
    rep.put("local", strat.local_success)
    rep.put("global", strat.global_success)
    rep.put("gap", abs(strat.global_success - strat.local_success))
    rep.put("found", strat.found)
    rep.put("artifact", _write(args.out, "strategy.txt", _strategy_text(strat)))
    rep.say(f"best local {strat.local_success:.12g} vs global {strat.global_success:.12g}: "
            + ("found" if strat.found else "not found"))
    return EXIT_PASS


def cmd_schmidt(args, rep):
    e = _load(args.ensemble)
    if not e.is_pure or len(e.dims) != 2:
        raise PreconditionError("schmidt needs a bipartite pure pair")
    f, g = to_state_matrix(e.state1), to_state_matrix(e.state2)
    cert = schmidt_correlate(f, g)
    rep.put("digest", _digest(e))
    rep.put("correlatable", cert.correlatable)
    rep.put("commutator_norm", cert.commutator_norm)
    rep.put("artifact", _write(args.out, "certificate.txt", format_certificate(cert)))
    if not cert.correlatable:
        rep.say(f"not Schmidt-correlatable: {cert.violated} has norm {cert.commutator_norm:.3e}")
        rep.put("violated", cert.violated)
        rep.put("verdict", "pass")
        return EXIT_PASS
    rep.say("Schmidt-correlatable; pair recreated at the second party")
    rep.put("borderline", cert.borderline)
    tol = _tol.rel(GAP_TOL)
    worst = 0.0
    for figure in ("min-error", "conclusive"):
        local, global_ = any_figure_of_merit_check(f, g, e.p1, e.p2, figure, certificate=cert)
        key = figure.replace("-", "_")
        rep.put(f"{key}.global", global_)
        rep.put(f"{key}.local", local)
        rep.say(f"{figure}: global {global_:.12g}, local {local:.12g}")
        worst = max(worst, abs(local - global_))
    return _verdict(rep, worst, tol)


def cmd_suite(args, rep):
    rep.put("seed", args.seed)
    rep.put("trials", "default" if args.trials is None else args.trials)
    failed = 0
    for c in CRITERIA:
        r = run_criterion(c, args.seed, args.trials)
        rep.say(r.line())
        rep.put(f"{c.key}.passed", r.passed)
        rep.put(f"{c.key}.checks", r.trials)
        rep.put(f"{c.key}.worst", r.worst)
        for k, v in r.notes.items():
            rep.put(f"{c.key}.{k}", v)
        if not r.passed:
            failed += 1
            if r.failing_case is not None:
                path = _write(args.out, f"{c.key}.case.txt", r.failing_case)
                rep.put(f"{c.key}.case", path)
                if path == "none":
                    rep.say("failing case:\n" + r.failing_case.rstrip())
    rep.put("failed", failed)
    rep.put("verdict", "pass" if failed == 0 else "fail")
    return EXIT_PASS if failed == 0 else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="locdisc", description="Optimal local discrimination of two pure states.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("ensemble", help="ensemble file")
        s.add_argument("--out", help="directory for protocol/certificate files")
        s.set_defaults(fn=fn)
        return s

    with_file("helstrom", cmd_helstrom, "global minimum-error measurement")
    loc = with_file("local", cmd_local, "synthesize and simulate an LOCC protocol")
    loc.add_argument("--figure", choices=("min-error", "conclusive"), default="min-error")
    loc.add_argument("--mixed-2d", action="store_true", help="allow mixed states with a 2-D joint support")
    with_file("conclusive-search", cmd_conclusive_search, "two-qubit conclusive local search")
    with_file("schmidt", cmd_schmidt, "Schmidt-correlation certificate and recreation check")
    s = sub.add_parser("suite", help="randomized acceptance battery")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--trials", type=int, default=None, help="trials per property (default: acceptance counts)")
    s.add_argument("--out", help="directory for failing cases")
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rep = Report(args.command)
    start = time.perf_counter()
    try:
        code = args.fn(args, rep)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvariantError, PreconditionError, StructureError, RegimeError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep.say(f"wall-time: {time.perf_counter() - start:.3f}s")
    sys.stdout.write(rep.render())
    return code
