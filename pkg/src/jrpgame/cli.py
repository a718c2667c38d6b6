"""Command-line entry point: ``jrp centralized|ne|enumerate|metrics|gen|batch``.

Exit codes: 0 success, 2 invalid input, 3 enumeration budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .centralized import centralized_policy, partition_uv
from .core import InvalidInstance, Instance, cost_breakdown, system_cost, validate_instance
from .dynamics import run_dynamics
from .generators import PRNG_NAME, RandomRanges, gen_adaptive_h, gen_k_private_pair, gen_random, gen_symmetric_poa, random_estimates
from .metrics import efficiency
from .oracle import BudgetExceeded, enumerate_nash
from .rules import make_weights, parse_rule

EXIT_INPUT = 2
EXIT_BUDGET = 3
ORACLE_N_LIMIT = 6
CSV_COLUMNS = ["seed", "n", "rule", "cost_c", "cost_w", "pos", "gamma_w", "jump_ratio", "bounds_pass"]


class InputError(Exception):
    pass


def fmt_number(x):
    """Shortest representation with at most 12 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, int):
        return x
    if not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    r = float(f"{x:.12g}")
    if r.is_integer() and abs(r) < 1e15:
        return int(r)
    return r


def clean(obj):
    """Recursively round floats for stable, golden-friendly JSON."""
    if isinstance(obj, float):
        return fmt_number(obj)
    if isinstance(obj, dict):
        return {k: clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), separators=(",", ":"))


def load_instance(path: str) -> Instance:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None
    try:
        return validate_instance(raw)
    except InvalidInstance as exc:
        raise InputError(f"{path}: {exc}") from None


def _weights(spec: str, inst: Instance):
    try:
        return parse_rule(spec, inst)
    except (OSError, ValueError) as exc:
        raise InputError(f"rule {spec!r}: {exc}") from None


def cmd_centralized(args) -> int:
    inst = load_instance(args.instance)
    part = partition_uv(inst)
    tc = centralized_policy(inst, part)
    ids = inst.ids
    out = {
        "U": [ids[i] for i in part.U],
        "V": [ids[i] for i in part.V],
        "s": part.s,
        "Tc": list(tc.values),
        "cost": system_cost(inst, tc),
    }
    print(dumps(out))
    return 0


def cmd_ne(args) -> int:
    inst = load_instance(args.instance)
    w = _weights(args.rule, inst)
    try:
        trace = run_dynamics(inst, w, order=args.order)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad --order: {exc}") from None
    tw = trace.policy
    costs = cost_breakdown(inst, w, tw)
    out = {
        "rule": w.rule,
        "Tw": list(tw.values),
        "cost": system_cost(inst, tw),
        "f": list(costs.retailer_costs),
        "moves": len(trace.moves),
        "rounds": trace.rounds,
    }
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl())
    print(dumps(out))
    return 0


def cmd_enumerate(args) -> int:
    inst = load_instance(args.instance)
    w = _weights(args.rule, inst)
    eqs = enumerate_nash(inst, w, mode=args.mode, budget=args.budget)
    print(dumps(eqs.to_dict()))
    return 0


def cmd_metrics(args) -> int:
    inst = load_instance(args.instance)
    w = _weights(args.rule, inst)
    report = efficiency(inst, w, with_oracle=args.oracle, mode=args.mode)
    print(dumps(report.to_dict()))
    return 0


def cmd_gen(args) -> int:
    fam = args.family.replace("_", "-")
    if fam == "symmetric-poa":
        inst = gen_symmetric_poa(args.n)
    elif fam == "k-private-pair":
        inst = gen_k_private_pair()[args.which - 1]
    elif fam == "adaptive-h":
        weights = json.loads(Path(args.weights).read_text()) if args.weights else None
        inst = gen_adaptive_h(weights, args.n)
    elif fam == "random":
        inst = gen_random(args.n, args.seed)
    else:
        raise InputError(f"unknown family {args.family!r}")
    # full precision so the emitted file reproduces the generated instance exactly
    print(json.dumps(inst.to_dict(), separators=(",", ":")))
    return 0


@dataclass
class BatchConfig:
    trials: int
    rules: list[str]
    n_min: int = 1
    n_max: int = 8
    seed: int = 0
    oracle: bool = False
    output: str | None = None
    eps_max: float = 2.0
    ranges: RandomRanges = field(default_factory=RandomRanges)

    @classmethod
    def from_dict(cls, raw: dict) -> "BatchConfig":
        gen = raw.get("generator", {})
        if gen.get("family", "random") != "random":
            raise InputError("batch runs support the random family only")
        n = gen.get("n", [1, 8])
        n_min, n_max = (n, n) if isinstance(n, int) else tuple(n)
        ranges = RandomRanges(**{k: tuple(v) if isinstance(v, list) else v for k, v in gen.get("ranges", {}).items()})
        cfg = cls(
            trials=int(raw.get("trials", 1)),
            rules=list(raw.get("rules", ["equal"])),
            n_min=int(n_min),
            n_max=int(n_max),
            seed=int(gen.get("seed", raw.get("seed", 0))),
            oracle=bool(raw.get("oracle", False)),
            output=raw.get("output"),
            eps_max=float(raw.get("eps_max", 2.0)),
            ranges=ranges,
        )
        if cfg.trials < 1:
            raise InputError("trials must be >= 1")
        if not 1 <= cfg.n_min <= cfg.n_max:
            raise InputError("need 1 <= n_min <= n_max")
        if cfg.oracle and cfg.n_max > ORACLE_N_LIMIT:
            raise InputError(f"oracle runs are limited to n <= {ORACLE_N_LIMIT}")
        return cfg


def batch_rows(cfg: BatchConfig):
    """One row per (trial, rule), in trial order."""
    import random

    for trial in range(cfg.trials):
        seed = cfg.seed + trial
        n = random.Random(seed).randint(cfg.n_min, cfg.n_max)
        inst = gen_random(n, seed, cfg.ranges)
        for rule in cfg.rules:
            name = rule.replace("-", "_")
            if name == "wps_hat":
                w = make_weights(name, inst, estimates=random_estimates(inst, seed, cfg.eps_max))
            else:
                w = make_weights(name, inst)
            rep = efficiency(inst, w, with_oracle=cfg.oracle)
            yield {
                "seed": seed,
                "n": n,
                "rule": rule,
                "cost_c": fmt_number(rep.cost_c),
                "cost_w": fmt_number(rep.cost_w),
                "pos": fmt_number(rep.pos_algorithmic),
                "gamma_w": fmt_number(rep.gamma_w),
                "jump_ratio": fmt_number(rep.jump_ratio),
                "bounds_pass": rep.bounds_pass,
            }


def cmd_batch(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {args.config}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.config}: malformed JSON ({exc})") from None
    try:
        cfg = BatchConfig.from_dict(raw)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad batch config: {exc}") from None
    output = args.output or cfg.output
    handle = open(output, "w", newline="") if output else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in batch_rows(cfg):
            writer.writerow(row)
    finally:
        if output:
            handle.close()
    print(f"# prng={PRNG_NAME} trials={cfg.trials} rules={','.join(cfg.rules)}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jrp", description="Non-cooperative joint replenishment games under WPS rules")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("centralized", help="optimal centralized POT policy and U/V partition")
    p.add_argument("instance")
    p.set_defaults(func=cmd_centralized)

    rule_help = "equal | wps-o | wps-h | wps-d | wps-hat:PATH | custom:PATH"
    p = sub.add_parser("ne", help="payoff-dominant equilibrium by better-response dynamics")
    p.add_argument("instance")
    p.add_argument("--rule", default="equal", help=rule_help)
    p.add_argument("--order", default=None, help="comma-separated retailer ids or random:SEED")
    p.add_argument("--trace", default=None, metavar="PATH", help="write the move log as JSON lines")
    p.set_defaults(func=cmd_ne)

    p = sub.add_parser("enumerate", help="all pure Nash equilibria by exhaustive search")
    p.add_argument("instance")
    p.add_argument("--rule", default="equal", help=rule_help)
    p.add_argument("--mode", choices=("pruned", "full"), default="pruned")
    p.add_argument("--budget", type=int, default=None, help="max policies (default $JRP_ORACLE_BUDGET or 1e7)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("metrics", help="efficiency report with bound checks")
    p.add_argument("instance")
    p.add_argument("--rule", default="equal", help=rule_help)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--mode", choices=("pruned", "full"), default="pruned")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("gen", help="emit a generated instance as JSON")
    p.add_argument("family", help="symmetric-poa | k-private-pair | adaptive-h | random")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--which", type=int, choices=(1, 2), default=1, help="k-private-pair member")
    p.add_argument("--weights", default=None, help="adaptive-h: JSON file with ascending weights")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("batch", help="run a random-instance experiment and write CSV")
    p.add_argument("config")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
