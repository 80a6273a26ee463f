"""Command-line front end.

Exit status: 0 when every hard assertion held, 1 for unreadable input or a
failed precondition, 2 when a hard (non-asymptotic) assertion failed.
Asymptotic diagnostics never affect the exit status.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from richlines import formats
from richlines.commutator import commutator_graph, component_analysis
from richlines.errors import InvariantViolation, PreconditionError
from richlines.families import (
    check_general_position,
    check_near_general_position,
    concurrency_map,
    decompose,
    group_by_slope,
    line_set,
)
from richlines.grid import GroundSet, enumerate_rich, rich_count_bound_check
from richlines.star import iterated_star, thm4_diagnostics
from richlines.suites import SUITES, run_suite

RANDOM_RETRY_FACTOR = 100


@dataclass
class RunConfig:
    command: str
    set_path: str | None = None
    lines_path: str | None = None
    out: str | None = None
    format: str = "json"
    params: dict = field(default_factory=dict)

    def need(self, name):
        value = self.params.get(name)
        if value is None:
            raise PreconditionError(f"--{name.replace('_', '-')} is required for {self.command}")
        return value

    def validate(self):
        d, a, e = (self.params.get(x) for x in ("delta", "alpha", "epsilon"))
        for name, v in (("delta", d), ("alpha", a), ("epsilon", e)):
            if v is not None and not (0 < v < 1):
                raise PreconditionError(f"--{name} must lie in (0, 1)")
        if None not in (d, a, e) and not (d < a < e):
            raise PreconditionError("parameters must satisfy 0 < delta < alpha < epsilon < 1")
        threads = self.params.get("threads") or 1
        if threads < 1:
            raise PreconditionError("--threads must be >= 1")


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--set", dest="set_path", help="ground set JSON file")
    p.add_argument("--lines", dest="lines_path", help="line set JSON file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--star-bound", dest="star_bound", type=int)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--threads", type=int, default=1)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="richlines", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-set", parents=[common], help="generate a ground set")
    g.add_argument("--kind", choices=["ap", "gp", "random", "file"], required=True)
    g.add_argument("--a0", default="1")
    g.add_argument("--d", default="1", help="AP common difference")
    g.add_argument("--r", default="2", help="GP ratio")
    g.add_argument("--max-num", dest="max_num", type=int)
    g.add_argument("--max-den", dest="max_den", type=int, default=4)

    sub.add_parser("enumerate", parents=[common], help="enumerate k-rich lines")
    sub.add_parser("analyze", parents=[common], help="parallel/star families and GP report")
    sub.add_parser("star", parents=[common], help="iterated dyadic star products")
    sub.add_parser("commutator", parents=[common], help="commutator graph and components")
    sub.add_parser("decompose", parents=[common], help="parallel and star family cover")
    v = sub.add_parser("verify", parents=[common], help="randomized lemma suites")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    return parser


def _config(args) -> RunConfig:
    params = {
        k: getattr(args, k)
        for k in ("n", "k", "delta", "epsilon", "alpha", "star_bound", "depth", "seed",
                  "trials", "threads", "kind", "a0", "d", "r", "max_num", "max_den", "suite")
        if hasattr(args, k)
    }
    cfg = RunConfig(args.command, args.set_path, args.lines_path, args.out, args.format, params)
    cfg.validate()
    return cfg


def _report(command: str, body: dict) -> dict:
    return {"schema_version": formats.SCHEMA_VERSION, "command": command, **body}


def _csv_unsupported(cfg):
    if cfg.format == "csv":
        raise PreconditionError(f"csv output is not available for {cfg.command}")


# ----------------------------------------------------------------- commands


def cmd_gen_set(cfg: RunConfig):
    kind = cfg.params["kind"]
    if kind == "file":
        if not cfg.set_path:
            raise PreconditionError("--set is required for --kind file")
        raw = formats.load_json(cfg.set_path)
        raw = raw.get("elements") if isinstance(raw, dict) else raw
        if not isinstance(raw, list):
            raise PreconditionError("input must list elements")
        A = GroundSet.of(formats.parse_q(v) for v in raw)
    else:
        n = cfg.need("n")
        if n < 1:
            raise PreconditionError("--n must be >= 1")
        a0 = formats.parse_q(cfg.params["a0"])
        if kind == "ap":
            d = formats.parse_q(cfg.params["d"])
            if d == 0 and n > 1:
                raise PreconditionError("AP difference must be nonzero")
            A = GroundSet.of(a0 + i * d for i in range(n))
        elif kind == "gp":
            r = formats.parse_q(cfg.params["r"])
            if a0 == 0 or r == 0:
                raise PreconditionError("GP excludes 0: a0 and r must be nonzero")
            if abs(r) == 1 and n > 1:
                raise PreconditionError("GP ratio must not be +-1")
            A = GroundSet.of(a0 * r**i for i in range(n))
        else:
            A = _random_set(n, cfg.need("seed"), cfg.params.get("max_num") or 10 * n,
                            cfg.params.get("max_den") or 4)
    if cfg.format == "csv":
        return "element\n" + "".join(formats.fmt_q(a) + "\n" for a in A.elements), True
    return _report("gen-set", formats.ground_set_to_json(A)), True


def _random_set(n, seed, max_num, max_den) -> GroundSet:
    rng = random.Random(seed)
    seen: set = set()
    for _ in range(RANDOM_RETRY_FACTOR * n):
        if len(seen) == n:
            break
        seen.add(Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den)))
    if len(seen) < n:
        raise PreconditionError(
            f"could not draw {n} distinct rationals after {RANDOM_RETRY_FACTOR * n} tries"
        )
    return GroundSet.of(seen)


def cmd_enumerate(cfg: RunConfig):
    A = formats.load_ground_set(_need_path(cfg.set_path, "--set"))
    k = cfg.need("k")
    records = enumerate_rich(A, k, threads=cfg.params.get("threads") or 1)
    check = rich_count_bound_check(A, k, records)
    if cfg.format == "csv":
        return formats.records_to_csv(records), True
    body = formats.rich_lines_to_json(k, records)
    body["bound_check"] = check
    return _report("enumerate", body), True


def cmd_analyze(cfg: RunConfig):
    _csv_unsupported(cfg)
    L = line_set(formats.load_lines(_need_path(cfg.lines_path, "--lines")))
    C = cfg.params.get("star_bound") or 2
    gp = check_general_position(L)
    ngp = check_near_general_position(L, C)
    body = {
        "line_count": len(L),
        "parallel_families": [
            {"slope": s, "size": len(ls), "lines": ls} for s, ls in group_by_slope(L).items()
        ],
        "star_families": [
            {"point": p, "size": len(ls), "lines": ls} for p, ls in concurrency_map(L).items()
        ],
        "general_position": _gp_json(gp),
        "near_general_position": {"C": C, **_gp_json(ngp)},
    }
    return _report("analyze", body), True


def _gp_json(rep) -> dict:
    out = {"is_gp": rep.is_gp, "witness": None}
    if rep.witness is not None:
        out["witness"] = {"kind": rep.witness.kind, "lines": list(rep.witness.lines),
                          "point": rep.witness.point}
    return out


def cmd_star(cfg: RunConfig):
    _csv_unsupported(cfg)
    A = formats.load_ground_set(_need_path(cfg.set_path, "--set"))
    L = formats.load_lines(_need_path(cfg.lines_path, "--lines"))
    delta = cfg.need("delta")
    alpha = cfg.params.get("alpha")
    levels = iterated_star(L, A, delta, cfg.params.get("depth") or 1, alpha=alpha)
    body = {"levels": [lv.summary() for lv in levels]}
    eps, C = cfg.params.get("epsilon"), cfg.params.get("star_bound")
    if None not in (eps, alpha, C):
        body["diagnostics"] = thm4_diagnostics(L, A, eps, alpha, delta, C, result=levels[0])
    return _report("star", body), True


def cmd_commutator(cfg: RunConfig):
    _csv_unsupported(cfg)
    A = formats.load_ground_set(_need_path(cfg.set_path, "--set"))
    L = formats.load_lines(_need_path(cfg.lines_path, "--lines"))
    G = commutator_graph(L, A, cfg.need("delta"))
    analysis = component_analysis(G)
    return _report("commutator", formats.commutator_to_json(G, analysis)), True


def cmd_decompose(cfg: RunConfig):
    L = formats.load_lines(_need_path(cfg.lines_path, "--lines"))
    dec = decompose(L)
    if cfg.format == "csv":
        return formats.decomposition_to_csv(dec), True
    return _report("decompose", formats.decomposition_to_json(dec)), True


def cmd_verify(cfg: RunConfig):
    _csv_unsupported(cfg)
    seed = cfg.need("seed")
    trials = cfg.params.get("trials")
    if trials is None or trials < 1:
        raise PreconditionError("--trials must be >= 1")
    summary = run_suite(cfg.params["suite"], trials, seed, cfg.params.get("threads") or 1)
    return _report("verify", summary), summary["ok"]


def _need_path(path, flag):
    if not path:
        raise PreconditionError(f"{flag} is required")
    return path


COMMANDS = {
    "gen-set": cmd_gen_set,
    "enumerate": cmd_enumerate,
    "analyze": cmd_analyze,
    "star": cmd_star,
    "commutator": cmd_commutator,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
}


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, exc: Exception, status: int) -> int:
    sys.stderr.write(json.dumps({"error": {"type": kind, "message": str(exc)}}) + "\n")
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        payload, ok = COMMANDS[cfg.command](cfg)
        text = payload if isinstance(payload, str) else formats.dumps(payload)
        _emit(text, cfg.out)
    except InvariantViolation as exc:
        return _error("hard_assertion", exc, 2)
    except (PreconditionError, ValueError) as exc:
        return _error("precondition", exc, 1)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
