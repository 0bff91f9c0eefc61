"""Command-line front end: ``borelk <subcommand> ...``.

Exit codes: 0 when every verdict is determined and passing, 2 when some
verdict is UNDETERMINED (raise a cutoff), 1 on errors or failed checks.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .borel import completion_iso_check, theorem1_report
from .completion import (IdealSpec, RadicalWitnessError, UnsupportedIdealError, ideal_ig, ideal_it,
                         membership, prop2_bound, radical_witness, separation_degree)
from .demazure import DivisibilityError, induction, reduced_word_w0, reduced_words_w0
from .laurent import StructuralError, format_poly, parse_poly
from .rootdata import (RootDatum, RootDatumError, WeylClosureError, generate_weyl, is_invariant,
                       parse_root_datum)
from .sampling import random_invariant, random_laurent
from .tower import (Tower, build_bt_tower, cyclic_tower, milnor_report, ml_check, scalar_tower,
                    window_lim)

SCHEMA = "borelk.report/1"

PASS, FAIL, UNDETERMINED, ERROR = "PASS", "FAIL", "UNDETERMINED", "ERROR"
EXIT = {PASS: 0, FAIL: 1, ERROR: 1, UNDETERMINED: 2}


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    output: str = "text"
    emit_matrices: bool = False
    timing: bool = False

    def validate(self) -> None:
        for k, v in self.params.items():
            if isinstance(v, int) and not isinstance(v, bool) and k not in ("seed",) and v < 1:
                raise ValueError(f"--{k} must be positive, got {v}")


@dataclass
class Report:
    command: str
    query: dict
    verdict: str
    result: dict
    seconds: float | None = None

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "command": self.command, "query": self.query,
               "verdict": self.verdict, "result": self.result}
        if self.seconds is not None:
            out["timing"] = {"seconds": round(self.seconds, 6)}
        return out

    @property
    def exit_code(self) -> int:
        return EXIT[self.verdict]


# -- handlers ------------------------------------------------------------------

def _group(cfg: RunConfig) -> RootDatum:
    if not cfg.group:
        raise RootDatumError("group", "--group is required")
    return parse_root_datum(cfg.group)


def _iso_check(cfg: RunConfig) -> tuple[str, dict]:
    rep = completion_iso_check(cfg.params["rank"], cfg.params["cutoff"])
    return (PASS if rep.passed else FAIL), rep.to_json(cfg.emit_matrices)


def _prop2(cfg: RunConfig) -> tuple[str, dict]:
    res = prop2_bound(_group(cfg), cfg.params["cutoff"])
    return (PASS if res.m is not None else UNDETERMINED), res.to_json()


def _radical(cfg: RunConfig) -> tuple[str, dict]:
    rd = _group(cfg)
    try:
        res = radical_witness(rd, cfg.params["cutoff"])
    except RadicalWitnessError as exc:
        return UNDETERMINED, {"group": rd.name, "cutoff": cfg.params["cutoff"],
                              "generator": exc.generator, "message": str(exc)}
    return PASS, res.to_json()


def _separation(cfg: RunConfig) -> tuple[str, dict]:
    res = separation_degree(_group(cfg), cfg.params["d"], cfg.params["Dmax"])
    return (PASS if res.D is not None else UNDETERMINED), res.to_json()


def _borel(cfg: RunConfig) -> tuple[str, dict]:
    rep = theorem1_report(_group(cfg), cfg.params["d"], cfg.params["D"])
    if not rep.image_in_invariants:
        return FAIL, rep.to_json(cfg.emit_matrices)
    return (PASS if rep.injective else UNDETERMINED), rep.to_json(cfg.emit_matrices)


def _ideal(cfg: RunConfig, rank: int | None) -> IdealSpec:
    which = cfg.params.get("ideal")
    if which == "IG":
        return ideal_ig(_group(cfg))
    if which == "IT":
        r = rank or (parse_root_datum(cfg.group).rank if cfg.group else None)
        if r is None:
            raise StructuralError("--ideal IT needs --rank or --group")
        return ideal_it(r)
    gens = cfg.params.get("gens")
    if gens:
        polys = [parse_poly(g, rank) for g in gens.split(";")]
        r = max(p.rank for p in polys)
        return IdealSpec("custom", tuple(parse_poly(g, r) for g in gens.split(";")))
    raise StructuralError("membership needs --ideal IG|IT or --gens")


def _membership(cfg: RunConfig) -> tuple[str, dict]:
    rank = cfg.params.get("rank")
    ideal = _ideal(cfg, rank)
    p = parse_poly(cfg.params["poly"], ideal.rank)
    res = membership(p, ideal, cfg.params["cutoff"])
    out = {"poly": format_poly(p), "ideal": ideal.label,
           "generators": [format_poly(g) for g in ideal.generators]}
    out.update(res.to_json())
    return PASS, out


def _load_tower(cfg: RunConfig) -> Tower:
    src = cfg.params.get("file")
    if src:
        try:
            return Tower.from_json(json.loads(Path(src).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise StructuralError(f"cannot read tower {src}: {exc}") from exc
    kind = cfg.params.get("preset") or "bt"
    if kind == "bt":
        return build_bt_tower(cfg.params.get("rank") or 1, cfg.params.get("kmax") or 4)
    n = cfg.params.get("stages") or 4
    if kind == "doubling":
        return scalar_tower(2, n)
    if kind == "identity":
        return scalar_tower(1, n)
    if kind == "cyclic2":
        return cyclic_tower(2, n)
    raise StructuralError(f"unknown tower preset {kind!r}")


def _tower_ml(cfg: RunConfig) -> tuple[str, dict]:
    t = _load_tower(cfg)
    rep = ml_check(t)
    out = {"stage_gens": [g.gens for g in t.stages], **rep.to_json(),
           "image_chains": rep.image_chains}
    return (PASS if rep.lim1_vanishes else UNDETERMINED), out


def _tower_lim(cfg: RunConfig) -> tuple[str, dict]:
    t = _load_tower(cfg)
    lim = window_lim(t)
    rep = milnor_report(t, t)
    out = {"stage_gens": [g.gens for g in t.stages], "window_lim": lim.describe(),
           "top_stage": t.top.describe(), "presentation": lim.to_json(),
           "milnor": rep.to_json()}
    return PASS, out


def _demazure(cfg: RunConfig) -> tuple[str, dict]:
    rd = _group(cfg)
    W = generate_weyl(rd)
    p = parse_poly(cfg.params["poly"], rd.rank)
    word = reduced_word_w0(W, rd)
    out = induction(p, rd, word)
    result = {"group": rd.name, "poly": format_poly(p), "word": word,
              "induction": format_poly(out), "invariant": is_invariant(out, W)}
    ok = result["invariant"]
    if cfg.params.get("verify_word_independence"):
        words = reduced_words_w0(W)
        rng = random.Random(cfg.params.get("seed", 0))
        samples = [p] + [random_laurent(rng, rd.rank) for _ in range(cfg.params.get("samples") or 10)]
        agree = all(len({induction(f, rd, w) for w in words}) == 1 for f in samples)
        result["words"] = words
        result["word_independent"] = agree
        ok = ok and agree
    return (PASS if ok else FAIL), result


def _ring_info(cfg: RunConfig) -> tuple[str, dict]:
    rd = _group(cfg)
    W = generate_weyl(rd)
    return PASS, {**rd.to_json(), "weyl_order": len(W),
                  "ig_generators": [format_poly(g) for g in rd.ig_generators()],
                  "reduced_word_w0": reduced_word_w0(W, rd)}


def _verify(cfg: RunConfig) -> tuple[str, dict]:
    """Desk-scale suite over the preset catalog."""
    rng = random.Random(cfg.params.get("seed", 0))
    checks: dict[str, str] = {}

    def record(name: str, ok: bool | None) -> None:
        checks[name] = PASS if ok else (UNDETERMINED if ok is None else FAIL)

    record("iso-check", all(completion_iso_check(j, d).passed for j in (1, 2, 3) for d in range(1, 7)))
    for name, N in (("SL2", 6), ("GL2", 8)):
        res = prop2_bound(parse_root_datum(name), N)
        record(f"prop2:{name}", None if res.m is None else res.m == 2 and res.certified)
    for name in ("SL2", "GL2", "SL3"):
        try:
            radical_witness(parse_root_datum(name), 10)
            record(f"radical:{name}", True)
        except RadicalWitnessError:
            record(f"radical:{name}", None)
    for j in (1, 2, 3):
        record(f"tower:bt{j}", ml_check(build_bt_tower(j, 8)).lim1_vanishes)
    for name in ("SL2", "GL2", "SL3"):
        rd = parse_root_datum(name)
        samples = [random_invariant(rng, rd) for _ in range(cfg.params.get("samples") or 20)]
        record(f"retraction:{name}", all(induction(g, rd) == g for g in samples))
    for name, d, D in (("SL2", 2, 3), ("GL2", 2, 4)):
        rep = theorem1_report(parse_root_datum(name), d, D)
        record(f"theorem1:{name}", rep.image_in_invariants and (rep.injective or None))
    verdicts = set(checks.values())
    verdict = FAIL if FAIL in verdicts else UNDETERMINED if UNDETERMINED in verdicts else PASS
    return verdict, {"seed": cfg.params.get("seed", 0), "checks": checks}


HANDLERS: dict[str, Callable[[RunConfig], tuple[str, dict]]] = {
    "iso-check": _iso_check, "prop2": _prop2, "radical": _radical,
    "separation": _separation, "borel": _borel, "membership": _membership,
    "tower ml": _tower_ml, "tower lim": _tower_lim, "demazure": _demazure,
    "ring info": _ring_info, "verify": _verify,
}


def run(cfg: RunConfig) -> Report:
    start = time.perf_counter()
    query = {"group": cfg.group, **cfg.params} if cfg.group else dict(cfg.params)
    try:
        cfg.validate()
        verdict, result = HANDLERS[cfg.command](cfg)
    except (RootDatumError, StructuralError, UnsupportedIdealError, WeylClosureError,
            DivisibilityError, ValueError) as exc:
        verdict = ERROR
        result = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, RootDatumError):
            result["check"] = exc.check
    seconds = time.perf_counter() - start if cfg.timing else None
    return Report(cfg.command, query, verdict, result, seconds)


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON report on stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    group = argparse.ArgumentParser(add_help=False)
    group.add_argument("--group", required=True, help="preset name (SL2, GL2, SL3, GL3, Gm^r, products like SL2xGm^1) or root-datum JSON path")

    parser = argparse.ArgumentParser(prog="borelk", description=__doc__.splitlines()[0],
                                     allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"borelk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iso-check", parents=[common], help="completion isomorphism mu_i -> x_i")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--cutoff", type=int, required=True)
    p.add_argument("--emit-matrices", action="store_true")

    p = sub.add_parser("prop2", parents=[common, group], help="least m with I_B^m in I_G R(B)")
    p.add_argument("--cutoff", type=int, required=True)

    p = sub.add_parser("radical", parents=[common, group], help="powers of 1 - l_i in I_G R(T)")
    p.add_argument("--cutoff", type=int, required=True)

    p = sub.add_parser("separation", parents=[common, group], help="interleaving of I_G- and I_T-adic filtrations")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--Dmax", type=int, required=True)

    p = sub.add_parser("borel", parents=[common, group], help="Borel map from R(G)/I_G^d into truncated K_0(BT)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--emit-matrices", action="store_true")

    p = sub.add_parser("membership", parents=[common], help="ideal membership modulo I_T^N")
    p.add_argument("--poly", required=True)
    p.add_argument("--ideal", choices=["IG", "IT"])
    p.add_argument("--gens", help="semicolon-separated generators of a custom ideal")
    p.add_argument("--group")
    p.add_argument("--rank", type=int)
    p.add_argument("--cutoff", type=int, required=True)

    tower = sub.add_parser("tower", help="towers of abelian groups")
    tsub = tower.add_subparsers(dest="tower_command", required=True)
    for name, helptext in (("ml", "Mittag-Leffler / lim^1 evidence"), ("lim", "windowed inverse limit")):
        p = tsub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--preset", choices=["bt", "doubling", "identity", "cyclic2"])
        p.add_argument("--file", help="tower JSON file")
        p.add_argument("--rank", type=int)
        p.add_argument("--kmax", type=int)
        p.add_argument("--stages", type=int)

    p = sub.add_parser("demazure", parents=[common, group], help="induction via Demazure operators")
    p.add_argument("--poly", required=True)
    p.add_argument("--verify-word-independence", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10)

    ring = sub.add_parser("ring", help="representation ring data")
    rsub = ring.add_subparsers(dest="ring_command", required=True)
    rsub.add_parser("info", parents=[common, group], help="root datum, Weyl group and generators")

    p = sub.add_parser("verify", parents=[common], help="run the desk-scale verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20)
    return parser


_NON_PARAMS = {"command", "tower_command", "ring_command", "json", "timing", "group", "emit_matrices"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = ns.command
    if command == "tower":
        command = f"tower {ns.tower_command}"
    elif command == "ring":
        command = f"ring {ns.ring_command}"
    params = {k: v for k, v in vars(ns).items()
              if k not in _NON_PARAMS and v is not None and v is not False}
    return RunConfig(command=command, group=getattr(ns, "group", None), params=params,
                     output="json" if ns.json else "text",
                     emit_matrices=getattr(ns, "emit_matrices", False), timing=ns.timing)


def render_text(rep: Report) -> str:
    lines = [f"{rep.command}: {rep.verdict}"]
    for k, v in rep.result.items():
        if isinstance(v, (dict, list)) and len(json.dumps(v)) > 100:
            v = json.dumps(v)[:97] + "..."
        lines.append(f"  {k}: {v}")
    if rep.seconds is not None:
        lines.append(f"  seconds: {rep.seconds:.3f}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    rep = run(cfg)
    if cfg.output == "json":
        sys.stdout.write(json.dumps(rep.to_json(), indent=2) + "\n")
    else:
        stream = sys.stderr if rep.verdict == ERROR else sys.stdout
        stream.write(render_text(rep) + "\n")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
