"""Command-line front end: analyze states, export tables, drive the chains.

Every subcommand is deterministic for a fixed (arguments, seed) pair, so the
emitted CSV/JSON files are stable byte for byte and safe to hash. Floats are
printed with 17 significant digits to survive a parse round trip.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import canonical, chains, entanglement, polytope, qstate, verify
from .errors import NumericalError, TriqentError, ValidationError

COARSE_TYPES = ("1", "2a", "2b", "3a", "3b", "4a", "4b", "4c", "5")

ANALYZE_FIELDS = ("state", "r_a", "r_b", "r_c", "big_r",
                  "s_a", "s_b", "s_c", "c_ab", "c_ac", "c_bc", "tau")
BOUNDS_FIELDS = ("big_r", "tau_max", "tau_star", "tau_up", "tau_down")
SAMPLE_FIELDS = ("type", "r_a", "r_b", "r_c", "big_r", "tau", "d")
VERIFY_FIELDS = ("name", "passed", "detail", "seed")


# ---------------------------------------------------------------------------
# formatting

def _cell(x) -> str:
    """One CSV/text cell; empty for missing or undefined values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        xf = float(x)
        return "%.17g" % xf if np.isfinite(xf) else ""
    return str(x)


def _jval(x):
    """JSON-safe value; NaN becomes null rather than invalid JSON."""
    if x is None or isinstance(x, (bool, np.bool_)):
        return None if x is None else bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        xf = float(x)
        return xf if np.isfinite(xf) else None
    return x


def _table(header: tuple[str, ...], rows: list[tuple], fmt: str) -> str:
    if fmt == "json":
        payload = [dict(zip(header, map(_jval, row))) for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    cells = [list(header)] + [[_cell(v) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(cells)
        return buf.getvalue()
    widths = [max(len(r[j]) for r in cells) for j in range(len(header))]
    return "".join(
        "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n"
        for row in cells)


def _record(header: tuple[str, ...], row: tuple, fmt: str) -> str:
    """Single-record output: one-row table or a flat JSON object."""
    if fmt == "json":
        return json.dumps(dict(zip(header, map(_jval, row))), indent=2) + "\n"
    if fmt == "csv":
        return _table(header, [row], "csv")
    width = max(len(k) for k in header)
    return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in zip(header, row))


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# state ingestion

def _named_states() -> dict[str, np.ndarray]:
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1.0
    zero = np.zeros(8, dtype=complex)
    zero[0] = 1.0
    return {
        "ghz": ghz,
        "w": chains.W_KET,
        "wt1": chains.WT1_KET,
        "wt2": chains.WT2_KET,
        "zero": zero,
    }


def _parse_state(tokens: list[str]) -> tuple[qstate.PureState3, str]:
    """State from a name, a JSON file path, or 16 whitespace-separated reals.

    Returns the state and a short id used in output rows.
    """
    parts: list[str] = []
    for tok in tokens:
        parts.extend(tok.split())
    if len(parts) == 1:
        tok = parts[0]
        named = _named_states()
        if tok.lower() in named:
            return qstate.normalize(named[tok.lower()]), tok.lower()
        if os.path.isfile(tok):
            try:
                with open(tok) as fh:
                    return qstate.PureState3.from_json(fh.read()), tok
            except (OSError, ValueError) as exc:
                raise ValidationError(f"could not read state file {tok}: {exc}")
        raise ValidationError(
            f"unknown state {tok!r}; expected one of {tuple(named)}, "
            "a JSON file, or 16 reals")
    if len(parts) == 16:
        try:
            vals = np.asarray([float(x) for x in parts])
        except ValueError as exc:
            raise ValidationError(f"could not parse state values: {exc}")
        return qstate.normalize(vals[0::2] + 1j * vals[1::2]), "custom"
    raise ValidationError(f"a state takes 1 or 16 values, got {len(parts)}")


def _resolve_seed(arg_seed: int | None) -> int:
    if arg_seed is not None:
        return arg_seed
    raw = os.environ.get("TRIQENT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"TRIQENT_SEED must be an integer, got {raw!r}")


# ---------------------------------------------------------------------------
# subcommand bodies; each returns (output text, exit code)

def _cmd_analyze(args) -> tuple[str, int]:
    s, sid = _parse_state(args.state)
    bt = entanglement.bloch_triple(s)
    row = (sid, bt.r_a, bt.r_b, bt.r_c, polytope.big_r(bt),
           entanglement.entropy_from_norm(bt.r_a, bits=args.bits),
           entanglement.entropy_from_norm(bt.r_b, bits=args.bits),
           entanglement.entropy_from_norm(bt.r_c, bits=args.bits),
           entanglement.concurrence_pair(s, "AB"),
           entanglement.concurrence_pair(s, "AC"),
           entanglement.concurrence_pair(s, "BC"),
           entanglement.tangle(s))
    return _record(ANALYZE_FIELDS, row, args.format), 0


def _cmd_classify(args) -> tuple[str, int]:
    s, _ = _parse_state(args.state)
    label = canonical.classify(s, tol=args.tol, cd_tol=args.zero_tol)
    if args.format == "text":
        return f"class {label.slocc}, type {label.kind}\n", 0
    return _record(("slocc", "kind"), (label.slocc, label.kind), args.format), 0


def _cmd_cd(args) -> tuple[str, int]:
    s, _ = _parse_state(args.state)
    cf = canonical.canonical_decompose(s)
    kind = canonical.classify(s, tol=args.tol, cd_tol=args.zero_tol).kind
    header = ("lambda0", "lambda1", "lambda2", "lambda3", "lambda4",
              "phi", "branch", "type", "degenerate")
    row = (*cf.lambdas, cf.phi, cf.branch, kind, cf.degenerate)
    return _record(header, row, args.format), 0


def _cmd_bounds(args) -> tuple[str, int]:
    if args.points < 1:
        raise ValidationError(f"points must be >= 1, got {args.points}")
    if not 0.0 <= args.r_min <= args.r_max:
        raise ValidationError(
            f"need 0 <= r-min <= r-max, got {args.r_min}, {args.r_max}")
    rows = []
    for r in np.linspace(args.r_min, args.r_max, args.points):
        rows.append((float(r),
                     polytope.bound_curve("tau_max", float(r)),
                     polytope.bound_curve("tau_star", float(r)),
                     polytope.bound_curve("tau_up", float(r)),
                     polytope.bound_curve("tau_down", float(r))))
    return _table(BOUNDS_FIELDS, rows, args.format), 0


def _cmd_sample(args) -> tuple[str, int]:
    if args.n < 1:
        raise ValidationError(f"n must be >= 1, got {args.n}")
    kinds = COARSE_TYPES if args.type == "all" else (args.type,)
    rows = []
    for i, kind in enumerate(kinds):
        sub = int(np.random.default_rng([args.seed, i]).integers(1 << 32))
        amps = qstate._sample_type_batch(kind, args.n, sub)
        r = entanglement._bloch_norms_batch(amps)
        tau = entanglement._tangle_batch(amps)
        for j in range(args.n):
            bt = entanglement.BlochTriple(*map(float, r[j]))
            rows.append((kind, bt.r_a, bt.r_b, bt.r_c, polytope.big_r(bt),
                         float(tau[j]), polytope.dist_to_diagonal(bt)))
    return _table(SAMPLE_FIELDS, rows, args.format), 0


def _cmd_sweep(args) -> tuple[str, int]:
    if args.points < 1:
        raise ValidationError(f"points must be >= 1, got {args.points}")
    grid = [float(d) for d in np.linspace(args.delta_min, args.delta_max, args.points)]
    records = chains.sweep(args.model, grid, params_policy=args.params_policy,
                           perturb=args.perturb, seed=args.seed,
                           threads=args.threads)
    rows = [tuple(getattr(rec, f) for f in chains.SWEEP_FIELDS) for rec in records]
    return _table(chains.SWEEP_FIELDS, rows, args.format), 0


def _cmd_verify(args) -> tuple[str, int]:
    results = verify.run_checks(names=args.check, seed=args.seed,
                                threads=args.threads)
    code = 0 if all(r.passed for r in results) else 3
    if args.format == "text":
        lines = [f"{'ok  ' if r.passed else 'FAIL'} {r.name}: {r.detail}"
                 for r in results]
        n_ok = sum(r.passed for r in results)
        lines.append(f"passed {n_ok}/{len(results)} checks (seed {args.seed})")
        return "\n".join(lines) + "\n", code
    rows = [(r.name, r.passed, r.detail, r.seed) for r in results]
    return _table(VERIFY_FIELDS, rows, args.format), code


# ---------------------------------------------------------------------------
# parser

def _add_common(sp, default_format: str) -> None:
    sp.add_argument("--format", choices=("csv", "json", "text"),
                    default=default_format, help="output format")
    sp.add_argument("--out", metavar="PATH",
                    help="write to this file instead of stdout")
    sp.add_argument("--seed", type=int, default=None,
                    help="RNG seed (default: TRIQENT_SEED env var, else 0)")
    sp.add_argument("--threads", type=int, default=1,
                    help="worker threads for batched subcommands")


def _add_state(sp) -> None:
    sp.add_argument("--state", nargs="+", required=True, metavar="SPEC",
                    help="named state (ghz, w, wt1, wt2, zero), "
                         "16 reals (8 re/im pairs), or a JSON file path")


def _add_tols(sp) -> None:
    sp.add_argument("--tol", type=float, default=1e-9,
                    help="geometric threshold for class decisions")
    sp.add_argument("--zero-tol", type=float, default=None,
                    help="threshold below which a canonical coefficient "
                         "counts as zero")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="triqent",
        description="Entanglement geometry of pure three-qubit states: "
                    "observables, canonical decomposition, polytope bounds, "
                    "and exactly solvable spin chains.")
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("analyze", help="all observables of one state")
    _add_state(sp)
    sp.add_argument("--bits", action="store_true",
                    help="report entropies in bits instead of nats")
    _add_common(sp, "text")

    sp = sub.add_parser("classify", help="SLOCC class and fine-grained type")
    _add_state(sp)
    _add_tols(sp)
    _add_common(sp, "text")

    sp = sub.add_parser("cd", help="canonical decomposition of one state")
    _add_state(sp)
    _add_tols(sp)
    _add_common(sp, "text")

    sp = sub.add_parser("bounds", help="tangle bound curves on an R grid")
    sp.add_argument("--r-min", type=float, default=0.0)
    sp.add_argument("--r-max", type=float, default=float(np.sqrt(3.0)))
    sp.add_argument("--points", type=int, default=200)
    _add_common(sp, "csv")

    sp = sub.add_parser("sample",
                        help="per-type scatter rows from the seeded sampler")
    sp.add_argument("--type", default="all",
                    choices=("all",) + qstate.TYPE_IDS)
    sp.add_argument("--n", type=int, default=1000,
                    help="samples per type")
    _add_common(sp, "csv")

    sp = sub.add_parser("sweep", help="chain dataset over a coupling grid")
    sp.add_argument("--model", required=True, choices=chains.MODELS)
    sp.add_argument("--delta-min", type=float, required=True)
    sp.add_argument("--delta-max", type=float, required=True)
    sp.add_argument("--points", type=int, default=101)
    sp.add_argument("--perturb", type=float, default=0.0,
                    help="probe-field strength; nonzero switches to "
                         "numeric-only rows")
    sp.add_argument("--params-policy", choices=("grid", "mc"), default="grid",
                    help="how degenerate levels are expanded into members")
    _add_common(sp, "csv")

    sp = sub.add_parser("verify", help="run the library self-check battery")
    sp.add_argument("--check", action="append", metavar="NAME",
                    choices=verify.check_names(),
                    help="run only this check (repeatable)")
    _add_common(sp, "text")

    return p


_DISPATCH = {
    "analyze": _cmd_analyze,
    "classify": _cmd_classify,
    "cd": _cmd_cd,
    "bounds": _cmd_bounds,
    "sample": _cmd_sample,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.seed = _resolve_seed(args.seed)
        text, code = _DISPATCH[args.verb](args)
        _emit(text, args.out)
        return code
    except NumericalError as exc:
        print(f"error:{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except TriqentError as exc:
        print(f"error:{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error:{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
