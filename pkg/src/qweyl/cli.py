"""``qweyl verify <suite>``: run one verification suite and report.

Exit status is 0 exactly when every check passes, 1 on a failed check,
2 on a usage error and 3 when a basis exceeds the capacity cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import List, Optional, Sequence

from .glrep import CapacityError
from .report import Report, report_render

SUITES = (
    "serre",
    "manin",
    "howe-dims",
    "omega-kappa",
    "q-pieri",
    "rs-identity",
    "braid",
    "flatness",
    "kz-casimir",
    "main-theorem",
)


@dataclass
class RunConfig:
    suite: str
    k: Optional[int] = None
    n: Optional[int] = None
    deg: Optional[int] = None
    lam: Optional[List[int]] = None
    mu: Optional[List[int]] = None
    h: List[complex] = field(default_factory=lambda: [0.05])
    tol_ode: float = 1e-12
    tol_spec: float = 1e-6
    out: Optional[str] = None
    seed: int = 0
    parallel: bool = False
    type: str = "casimir"

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.tol_ode > self.tol_spec / 100:
            raise ValueError("need tol_ode <= tol_spec / 100")
        for name in ("k", "n", "deg"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"--{name} must be non-negative")


def parse_ints(text: str) -> List[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def parse_complex_list(text: str) -> List[complex]:
    """Comma-separated complex numbers; ``i`` and ``j`` both mark the imaginary unit."""
    return [complex(x.replace("i", "j")) for x in text.replace(" ", "").split(",") if x]


def _value(d, key, default):
    v = d.get(key)
    return default if v is None else v


def run_suite(cfg: RunConfig) -> Report:
    cfg.validate()
    s = cfg.suite
    if s == "serre":
        from .qmatspace import verify_serre

        k, n, deg = _value(vars(cfg), "k", 2), _value(vars(cfg), "n", 2), _value(vars(cfg), "deg", 3)
        rep = verify_serre(k, n, "k", deg)
        rep.extend(verify_serre(k, n, "n", deg))
        rep.config["side"] = "both"
        return rep
    if s == "manin":
        from .qmatspace import verify_manin

        return verify_manin(cfg.k or 2, cfg.n or 2, seed=cfg.seed, max_degree=_value(vars(cfg), "deg", 5))
    if s == "howe-dims":
        from .glrep import verify_howe_dims

        return verify_howe_dims(cfg.k or 2, cfg.n or 2, _value(vars(cfg), "deg", 4))
    if s == "omega-kappa":
        from .glrep import verify_omega_kappa

        return verify_omega_kappa(cfg.k or 2, cfg.n or 2, _value(vars(cfg), "deg", 4))
    if s == "q-pieri":
        from .qmatspace import verify_q_pieri

        return verify_q_pieri(_value(vars(cfg), "deg", 4), cfg.k or 2)
    if s == "rs-identity":
        from .braidops import verify_RS

        return verify_RS(cfg.k or 2, cfg.n or 2, _value(vars(cfg), "deg", 4))
    if s == "braid":
        from .braidops import verify_braid_family
        from .monodromy import verify_monodromy_braid

        k, n = cfg.k or 2, cfg.n or 3
        rep = verify_braid_family(k, n, _value(vars(cfg), "deg", 3))
        if n >= 3:
            lam = cfg.lam or [1] + [0] * (n - 1)
            rep.extend(verify_monodromy_braid(n, lam, max(n, k), cfg.h[0], cfg.tol_ode, cfg.tol_spec))
        return rep
    if s == "flatness":
        from .monodromy import verify_flatness

        return verify_flatness(cfg.type, cfg.n or 3, cfg.k or 2, _value(vars(cfg), "deg", 3))
    if s == "kz-casimir":
        from .monodromy import verify_kz_casimir

        n = cfg.n or 3
        mu = cfg.mu or [1] * n
        return verify_kz_casimir(n, cfg.lam, mu, cfg.k or 2, cfg.h, cfg.tol_spec, cfg.tol_ode)
    if s == "main-theorem":
        from .monodromy import verify_main_theorem

        n = cfg.n or 2
        lam = cfg.lam or [1] + [0] * (n - 1)
        return verify_main_theorem(n, lam, cfg.k or n, cfg.h, cfg.mu, cfg.tol_spec, tol_ode=cfg.tol_ode,
                                   parallel=cfg.parallel)
    raise ValueError(f"unknown suite {s!r}")


def write_outputs(rep: Report, out: str) -> None:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rep.to_json())
    for a, res in enumerate(getattr(rep, "results", [])):
        for r in res.reports:
            csv = path.with_name(f"{path.stem}_mu{'-'.join(map(str, res.mu))}_run{a}_T{r.generator}.csv")
            csv.write_text(r.to_csv())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qweyl", description="Exact and numerical checks for quantum Weyl group braid actions.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--k", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--deg", type=int, help="degree or weight bound")
    v.add_argument("--lambda", dest="lam", type=parse_ints, help="comma-separated highest weight")
    v.add_argument("--mu", type=parse_ints, help="comma-separated column degrees / weight")
    v.add_argument("--h", type=parse_complex_list, help="comma-separated complex h values, e.g. 0.05,0.03+0.01i")
    v.add_argument("--tol-ode", type=float)
    v.add_argument("--tol-spec", type=float)
    v.add_argument("--out", help="path of the JSON report")
    v.add_argument("--seed", type=int)
    v.add_argument("--parallel", action="store_true", default=None)
    v.add_argument("--type", choices=("casimir", "kz"), help="connection for the flatness suite")
    v.add_argument("--config", help="JSON file with defaults; flags override it")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        names = {f.name for f in fields(RunConfig)}
        aliases = {"lambda": "lam", "tol-ode": "tol_ode", "tol-spec": "tol_spec"}
        for key, val in raw.items():
            key = aliases.get(key, key)
            if key not in names:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = val
        if "h" in values:
            values["h"] = [complex(x.replace("i", "j")) if isinstance(x, str) else complex(x) for x in values["h"]]
    for name in ("k", "n", "deg", "lam", "mu", "h", "tol_ode", "tol_spec", "out", "seed", "parallel", "type"):
        val = getattr(args, name)
        if val is not None:
            values[name] = val
    values["suite"] = args.suite
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        rep = run_suite(cfg)
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        write_outputs(rep, cfg.out)
    sys.stdout.write(report_render(rep))
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
