"""Command-line front end.

Exit codes: 0 on completion, 1 for usage/config errors, 2 when a custom
vector set is malformed or fails validation.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import coloring, harness, hvt2d, quantum, strategies
from .ks_core import KsSetError, cabello_set, load_ks_set, validate_ks_set

EXIT_OK, EXIT_USAGE, EXIT_BAD_SET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", default="builtin", help="vector-set file, or 'builtin' (default)")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--format", choices=("human", "json"), default="human")

    parser = _Parser(prog="kstelepathy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("verify", parents=[common], help="structural report of the vector set")
    sub.add_parser("search", parents=[common], help="non-contextual valuations and parity certificate")
    sub.add_parser("min-context", parents=[common], help="minimum number of contextual rays")
    sub.add_parser("best-classical", parents=[common], help="optimal no-communication strategy")
    play = sub.add_parser("play", parents=[common], help="play seeded rounds and print the transcript")
    play.add_argument("--strategy", default="quantum",
                      help="quantum | best-classical | one-cbit | deterministic:<file> | mixture:<file>")
    play.add_argument("--rounds", type=_positive, default=10000)
    hvt = sub.add_parser("hvt2d", parents=[common], help="hidden-variable model vs Born rule table")
    hvt.add_argument("--pairs", type=_positive, default=101)
    hvt.add_argument("--samples", type=_positive, default=10**6)
    inspect = sub.add_parser("inspect", parents=[common], help="joint outcome distribution of two bases")
    inspect.add_argument("--alice-basis", type=int, required=True)
    inspect.add_argument("--bob-basis", type=int, required=True)
    return parser


def _load_set(source: str):
    if source == "builtin":
        return cabello_set()
    return load_ks_set(source)


def _assignment_json(a) -> list:
    return [{"vector": list(v.coords), "value": b} for v, b in a.items()]


def cmd_verify(ks, args):
    report = validate_ks_set(ks)
    text = report.to_text()
    return report.to_json(), text, EXIT_OK if report.ok else EXIT_BAD_SET


def cmd_search(ks, args):
    found = coloring.search_noncontextual(ks)
    cert = coloring.parity_certificate(ks)
    payload = {
        "satisfying": [_assignment_json(a) for a in found],
        "parityCertificate": cert.to_json() if cert else None,
    }
    lines = [f"non-contextual valuations: {len(found)}"]
    if cert:
        lines.append(f"parity certificate: {cert.basis_count} bases (odd), "
                     f"every ray occurs an even number of times")
    else:
        lines.append("parity certificate: none")
    return payload, "\n".join(lines), EXIT_OK


def cmd_min_context(ks, args):
    defect, witness = coloring.min_contextuality(ks)
    payload = coloring.witness_to_json(ks, defect, witness)
    mism = " ".join("(" + ",".join(map(str, v)) + ")" for v in payload["mismatchedVectors"])
    text = (f"minimum contextual rays: {defect}\n"
            f"witness (marked slot per basis): {payload['witness']}\n"
            f"contextual rays: {mism or '-'}")
    return payload, text, EXIT_OK


def cmd_best_classical(ks, args):
    p, s = strategies.best_classical(ks)
    n_q = 4 * ks.n_bases
    payload = {
        "winProb": quantum.frac_str(p),
        "wins": int(p * n_q),
        "questions": n_q,
        "strategy": s.to_json(),
    }
    text = (f"best classical win probability: {p} ({int(p * n_q)}/{n_q} questions)\n"
            f"Alice's marked slots: {list(s.alice_choices)}")
    return payload, text, EXIT_OK


def cmd_play(ks, args):
    try:
        s = strategies.strategy_from_name(args.strategy, ks)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot build strategy {args.strategy!r}: {exc}") from None
    t = harness.play_rounds(s, args.rounds, args.seed)
    summ = t.summary()
    text = (f"strategy: {t.strategy_name}  seed: {t.seed}\n"
            f"rounds: {summ['rounds']}  wins: {summ['wins']}  win rate: {summ['winRate']}  "
            f"mean bits/round: {summ['meanBits']}")
    return t.to_json(), text, EXIT_OK


def cmd_hvt2d(ks, args):
    rows = hvt2d.grid_table(args.pairs, args.samples, args.seed)
    lines = [f"{'n.m':>8} {'analytic':>10} {'born':>10} {'mc':>10} {'stderr':>10}"]
    for r in rows:
        lines.append(f"{r['dot']:8.4f} {r['analytic']:10.6f} {r['born']:10.6f} "
                     f"{r['mcEstimate']:10.6f} {r['stdError']:10.2e}")
    return {"rows": rows}, "\n".join(lines), EXIT_OK


def cmd_inspect(ks, args):
    for k in (args.alice_basis, args.bob_basis):
        if not 1 <= k <= ks.n_bases:
            raise UsageError(f"basis index {k} out of range 1..{ks.n_bases}")
    try:
        d = quantum.joint_distribution(ks, args.alice_basis, args.bob_basis)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return d.to_json(), d.to_text(), EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "search": cmd_search,
    "min-context": cmd_min_context,
    "best-classical": cmd_best_classical,
    "play": cmd_play,
    "hvt2d": cmd_hvt2d,
    "inspect": cmd_inspect,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        ks = _load_set(args.set)
    except OSError as exc:
        print(f"error: cannot read vector set: {exc}", file=stderr)
        return EXIT_USAGE
    except KsSetError as exc:
        print(f"error: invalid vector set: {exc}", file=stderr)
        return EXIT_BAD_SET

    if args.command != "verify":
        report = validate_ks_set(ks)
        if not report.ok:
            print("error: vector set failed validation\n" + report.to_text(), file=stderr)
            return EXIT_BAD_SET

    try:
        payload, text, code = COMMANDS[args.command](ks, args)
    except (UsageError, coloring.SearchTooLarge) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE

    if args.format == "json":
        stdout.write(json.dumps(payload, separators=(",", ":")) + "\n")
    else:
        stdout.write(text + "\n")
    return code


def main():
    sys.exit(run())
