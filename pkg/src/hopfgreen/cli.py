"""Command-line entry point: catalog inspection, verification suites and report emission."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import __version__
from .algebra import make_truncated_algebra
from .automorphism import BudgetExceeded, make_automorphism, random_automorphism
from .decomp import decompose
from .field import make_field
from .geometry import noble_points, support, support_is_partial
from .greenring import GreenError, cg_table, noble_correspondence_check, pa_counterexample
from .hopf import catalog, hopf_isomorphic, twist_hopf, verify_bialgebra
from .modules import parse_module, tensor_module

COMMANDS = (
    "catalog", "verify-hopf", "tensor", "decompose", "support", "nobles",
    "green-table", "noble-correspondence", "pa-check", "hopf-iso",
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    p: int = 2
    ext: int = 1
    orders: list[int] = field(default_factory=lambda: [1, 1])
    structures: list[str] = field(default_factory=list)
    nmax: int = 6
    seed: int = 0
    format: str = "json"
    out: str | None = None
    module: str | None = None
    left: str | None = None
    right: str | None = None
    bound: int | None = None
    all_structures: bool = False
    compare: bool = False
    case: str = "n1n1n1"
    n: int = 1
    m: int = 2
    budget: int = 100_000
    roundtrips: int = 0
    automorphisms: dict[str, list[str]] = field(default_factory=dict)

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


def _orders(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"orders must be comma-separated integers, got {text!r}") from None


def _labels(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hopfgreen", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hopfgreen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file with default settings (flags override it)")
        sp.add_argument("--p", type=int)
        sp.add_argument("--ext", type=int, help="field extension degree")
        sp.add_argument("--orders", type=_orders, help="truncation exponents, e.g. 1,1")
        sp.add_argument("--structures", type=_labels, help="comma-separated catalog labels")
        sp.add_argument("--nmax", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--format", choices=["json", "csv", "text"])
        sp.add_argument("--out")
        sp.add_argument("--budget", type=int)
        if name in ("tensor", "decompose", "support"):
            sp.add_argument("--module", help='module name, e.g. "2V4@[1:0] + P"')
        if name in ("tensor", "noble-correspondence", "hopf-iso"):
            sp.add_argument("--left")
            sp.add_argument("--right")
        if name == "green-table":
            sp.add_argument("--bound", type=int)
            sp.add_argument("--all-structures", action="store_true", default=None)
            sp.add_argument("--compare", action="store_true", default=None)
        if name == "pa-check":
            sp.add_argument("--case", choices=["n1n1n1", "n_n_m"])
            sp.add_argument("--n", type=int)
            sp.add_argument("--m", type=int)
        if name == "hopf-iso":
            sp.add_argument("--roundtrips", type=int, help="number of seeded twist round-trips to test")
    return parser


def make_config(argv: list[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    values: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    for key, val in vars(args).items():
        if key != "config" and val is not None:
            values[key] = val
    known = RunConfig.__dataclass_fields__
    unknown = set(values) - set(known)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if isinstance(values.get("orders"), str):
        values["orders"] = _orders(values["orders"])
    if isinstance(values.get("structures"), str):
        values["structures"] = _labels(values["structures"])
    return RunConfig(**values)


# --- helpers -----------------------------------------------------------------------

def _setup(cfg: RunConfig):
    A = make_truncated_algebra(make_field(cfg.p, cfg.ext), cfg.orders)
    auts = {name: make_automorphism(A, imgs, name=name) for name, imgs in cfg.automorphisms.items()}
    return A, auts


def _structure(A, auts, label: str):
    """A catalog label, or twist(<label>,<automorphism name>)."""
    label = label.strip()
    if label.startswith("twist(") and label.endswith(")"):
        base, _, aut = label[len("twist("):-1].rpartition(",")
        if aut.strip() not in auts:
            raise UsageError(f"unknown automorphism {aut.strip()!r} in {label!r}")
        return twist_hopf(_structure(A, auts, base), auts[aut.strip()])
    for H in catalog(A):
        if H.label == label:
            return H
    raise UsageError(f"no structure {label!r}; catalog has {[H.label for H in catalog(A)]}")


def _selected(A, auts, cfg: RunConfig):
    if cfg.structures:
        return [_structure(A, auts, s) for s in cfg.structures]
    return catalog(A)


def _need_module(cfg: RunConfig) -> str:
    if not cfg.module:
        raise UsageError("--module is required")
    return cfg.module


# --- commands ------------------------------------------------------------------------
# each returns (result dict, failed flag, optional csv text)

def cmd_catalog(cfg, A, auts):
    return {"structures": [H.to_json() for H in catalog(A)]}, False, None


def cmd_verify_hopf(cfg, A, auts):
    out = {}
    failed = False
    for H in _selected(A, auts, cfg):
        rep = verify_bialgebra(H)
        out[H.label] = rep.to_json()
        failed |= not rep.ok
    return {"reports": out, "all_pass": not failed}, failed, None


def cmd_tensor(cfg, A, auts):
    M = parse_module(A, _need_module(cfg), auts)
    right = parse_module(A, cfg.right or cfg.module, auts)
    out = {}
    for H in _selected(A, auts, cfg):
        T = tensor_module(H, M, right)
        out[H.label] = {"dim": T.dim, "decomposition": decompose(T, seed=cfg.seed).to_json()}
    failed = any(not v["decomposition"]["certified"] for v in out.values())
    return {"left": cfg.module, "right": cfg.right or cfg.module, "products": out}, failed, None


def cmd_decompose(cfg, A, auts):
    M = parse_module(A, _need_module(cfg), auts)
    dec = decompose(M, seed=cfg.seed)
    return {"module": cfg.module, "dim": M.dim, "decomposition": dec.to_json()}, not dec.certified, None


def cmd_support(cfg, A, auts):
    M = parse_module(A, _need_module(cfg), auts)
    pts = [str(p) for p in support(A, M)]
    return {"module": cfg.module, "support": pts, "partial": support_is_partial(A),
            "scope": f"points rational over {A.field}"}, False, None


def cmd_nobles(cfg, A, auts):
    out = {H.label: [str(p) for p in noble_points(H)] for H in _selected(A, auts, cfg)}
    return {"noble_points": out, "scope": f"enumeration over {A.field}"}, False, None


def cmd_green_table(cfg, A, auts):
    if not A.is_cyclic:
        raise UsageError("green-table needs a single generator (e.g. --orders 3)")
    structs = catalog(A) if cfg.all_structures or not cfg.structures else _selected(A, auts, cfg)
    tables = [cg_table(H, cfg.bound, seed=cfg.seed) for H in structs]
    result = {"tables": [t.to_json() for t in tables]}
    failed = False
    if cfg.compare:
        same = all(t.cells == tables[0].cells for t in tables)
        result["tables_identical"] = same
        failed = not same
    csv_text = "".join(t.to_csv() if k == 0 else t.to_csv().split("\n", 1)[1] for k, t in enumerate(tables))
    return result, failed, csv_text


def cmd_noble_correspondence(cfg, A, auts):
    left = cfg.left or "G0"
    right = cfg.right
    pairs = []
    if right:
        pairs.append((_structure(A, auts, left), _structure(A, auts, right)))
    else:
        base = _structure(A, auts, left)
        pairs = [(base, H) for H in catalog(A) if H.label != base.label]
    reps = [noble_correspondence_check(a, b, nmax=cfg.nmax, seed=cfg.seed) for a, b in pairs]
    failed = any(not r.overall for r in reps)
    return {"reports": [r.to_json() for r in reps]}, failed, None


def cmd_pa_check(cfg, A, auts):
    rep = pa_counterexample(cfg.case, p=cfg.p, n=cfg.n, m=cfg.m, seed=cfg.seed).to_json()
    # a confirmed counterexample is a failed correspondence verdict
    return rep, rep["verdict"] == "NOT in noble correspondence", None


def cmd_hopf_iso(cfg, A, auts):
    results = []
    if cfg.left and cfg.right:
        pairs = [(_structure(A, auts, cfg.left), _structure(A, auts, cfg.right))]
    else:
        pairs = list(combinations(_selected(A, auts, cfg), 2))
    for H1, H2 in pairs:
        v = hopf_isomorphic(H1, H2, budget=cfg.budget)
        if v.kind == "budget_exceeded":
            raise BudgetExceeded(f"automorphism search for {H1.label} vs {H2.label} exceeds budget {cfg.budget}")
        results.append({"left": H1.label, "right": H2.label, **v.to_json()})
    rng = np.random.default_rng(cfg.seed)
    trips = []
    for k in range(cfg.roundtrips):
        H = catalog(A)[k % len(catalog(A))]
        phi = random_automorphism(A, rng)
        v = hopf_isomorphic(H, twist_hopf(H, phi), budget=cfg.budget)
        trips.append({"structure": H.label, "phi": phi.to_json(), "verdict": v.kind})
    failed = any(r["verdict"] != "iso" for r in results) or any(t["verdict"] != "iso" for t in trips)
    return {"pairs": results, "roundtrips": trips, "scope": "base field only"}, failed, None


HANDLERS = {
    "catalog": cmd_catalog,
    "verify-hopf": cmd_verify_hopf,
    "tensor": cmd_tensor,
    "decompose": cmd_decompose,
    "support": cmd_support,
    "nobles": cmd_nobles,
    "green-table": cmd_green_table,
    "noble-correspondence": cmd_noble_correspondence,
    "pa-check": cmd_pa_check,
    "hopf-iso": cmd_hopf_iso,
}


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return lines


def render(cfg: RunConfig, A, result: dict, csv_text: str | None) -> str:
    if cfg.format == "csv":
        if csv_text is None:
            raise UsageError(f"{cfg.command} has no CSV output; use --format json or text")
        return csv_text
    report = {
        "tool": "hopfgreen",
        "version": __version__,
        "command": cfg.command,
        "field": A.field.to_json(),
        "algebra": A.descriptor(),
        "config": cfg.to_json(),
        "result": result,
    }
    if cfg.format == "text":
        head = []
        if cfg.command == "green-table" and "tables_identical" in result:
            head.append(f"tables identical: {str(result['tables_identical']).lower()}")
        if cfg.command == "pa-check":
            head.append(f"verdict: {result['verdict']}")
        return "\n".join(head + _text(report)) + "\n"
    return json.dumps(report, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def run(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = make_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        A, auts = _setup(cfg)
        if cfg.command == "pa-check":
            A = None
        result, failed, csv_text = HANDLERS[cfg.command](cfg, A, auts)
        if A is None:
            A = make_truncated_algebra(make_field(cfg.p, cfg.ext), result["orders"])
        text = render(cfg, A, result, csv_text)
    except (ValueError, GreenError, BudgetExceeded) as exc:  # all validation errors derive from ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if failed else EXIT_OK


def main() -> None:
    sys.exit(run())
