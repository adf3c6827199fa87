"""Command-line front end: ``barriers <group> <command> [flags]``.

Exit status: 0 on success or Pass, 1 on Fail or nothing found, 2 on usage
errors, 3 when fuel or the window runs out.  JSON reports validate against
``REPORT_SCHEMA``.  Text reports carry a ``# seed=`` header whenever the
command consumes the seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import jsonschema

from . import barrier as bar
from . import embed as emb
from . import ideals as idl
from . import ramsey as ram
from .ordinal import Ordinal, to_text as ord_text
from .sets import Exhausted, SetDescriptor, Window, as_set, finite_set

REPORT_SCHEMA = {
    "type": "object",
    "required": ["tool", "command", "seed", "window", "status", "result"],
    "properties": {
        "tool": {"const": "barriers"},
        "command": {"type": "string"},
        "seed": {"type": "integer"},
        "window": {
            "type": "object",
            "required": ["bound", "depth"],
            "properties": {"bound": {"type": "integer", "minimum": 1},
                           "depth": {"type": "integer", "minimum": 1}},
        },
        "status": {"enum": ["ok", "pass", "fail", "not-found", "exhausted", "error"]},
        "result": {},
    },
    "additionalProperties": False,
}

EXIT = {"ok": 0, "pass": 0, "fail": 1, "not-found": 1, "error": 2, "exhausted": 3}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    bound: int = 12
    depth: int = 0
    fuel: int = 0
    fmt: str = "text"
    seed: int = 0
    out: Optional[str] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.depth == 0:
            self.depth = self.bound
        if self.fuel == 0:
            self.fuel = 10 * self.bound
        if not self.bound >= self.depth >= 1:
            raise UsageError("need bound >= depth >= 1")
        if self.fuel < 1:
            raise UsageError("fuel must be positive")

    @property
    def window(self) -> Window:
        return Window(self.bound, self.depth)


# input helpers ----------------------------------------------------------


def _text(value: str) -> str:
    if value.startswith("@"):
        return Path(value[1:]).read_text()
    return value


def read_code(value: str) -> bar.Code:
    text = _text(value).strip()
    if text.startswith("{") and text.endswith("}") and '"' in text:
        return bar.from_json(json.loads(text))
    return bar.parse_code(text)


def read_set(value: str) -> SetDescriptor:
    text = _text(value).strip()
    if all(ch.isdigit() or ch in ", " for ch in text):
        return finite_set(int(x) for x in text.replace(" ", "").split(",") if x)
    return bar.parse_set(text)


def read_finite(value: str) -> tuple:
    return as_set(int(x) for x in _text(value).replace(" ", "").split(",") if x)


def read_coloring(value: str) -> ram.Coloring:
    if value.startswith("@"):
        return ram.read_csv(_text(value))
    return ram.parse_coloring(value)


def read_json(value: str):
    return json.loads(_text(value))


def plain(obj):
    """JSON-safe copy of a result."""
    if hasattr(obj, "to_json"):
        return plain(obj.to_json())
    if isinstance(obj, Ordinal):
        return ord_text(obj)
    if isinstance(obj, bar.Verdict):
        return {"ok": obj.ok, "witness": plain(obj.witness)}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    if isinstance(obj, SetDescriptor):
        return obj.to_json()
    return obj


def verdict_status(v: bar.Verdict) -> str:
    return "pass" if v.ok else "fail"


def verdict_line(v: bar.Verdict) -> str:
    return "Pass" if v.ok else f"Fail {plain(v.witness)}"


# maps for the ideals commands ---------------------------------------------


def read_map(spec: str, codeB, codeC, w: Window):
    """``random:<seed>``, ``spread:<seed>``, ``next`` or ``const:<set>``."""
    kind, _, arg = spec.partition(":")
    if kind == "random":
        return idl.random_map(codeB, codeC, w, int(arg or 0))
    if kind == "spread":
        return idl.random_map(codeB, codeC, w, int(arg or 0), spread=True)
    if kind == "next":
        def nxt(b):
            # lex-least C element starting at max(b), or as high as the window allows
            for lo in range(b[-1] if b else 0, -1, -1):
                for c in bar.elements_on(codeC, range(lo, w.bound), w.depth):
                    return c
            raise UsageError("C has no element inside the window")
        return {b: nxt(b) for b in bar.elements(codeB, w)}
    if kind == "const":
        c = read_finite(arg)
        if not bar.contains(codeC, c):
            raise UsageError(f"{c} is not an element of C")
        return {b: c for b in bar.elements(codeB, w)}
    raise UsageError(f"unknown map {spec!r}")


def read_grid(value: str) -> list:
    return [read_set(part) for part in _text(value).split(";") if part.strip()]


# commands ---------------------------------------------------------------
# each returns (status, result, text lines, seeded)


def cmd_barrier(cfg: RunConfig, o: dict):
    code = read_code(o["code"])
    w = cfg.window
    name = cfg.command.split()[-1]
    if name == "rank":
        r = bar.rank(code)
        return "ok", {"rank": ord_text(r)}, [ord_text(r)], False
    if name == "truncated-rank":
        r = bar.truncated_rank(code, w)
        return "ok", {"rank": ord_text(r)}, [ord_text(r)], False
    if name == "contains":
        s = read_finite(o["set"])
        inb, intree = bar.contains(code, s), bar.tree_contains(code, s)
        return "ok", {"in_barrier": inb, "in_tree": intree}, [str(inb).lower()], False
    if name == "sub-barrier":
        r = bar.sub_barrier(code, read_finite(o["set"]))
        return "ok", {"code": bar.to_json(r), "text": bar.to_text(r)}, [bar.to_text(r)], False
    if name == "elements":
        els = list(bar.elements(code, w))
        return "ok", {"elements": els}, [",".join(map(str, e)) or "{}" for e in els], False
    if name == "verify-sperner":
        v = bar.verify_sperner(code, w)
        return verdict_status(v), v, [verdict_line(v)], False
    if name == "verify-cover":
        v = bar.verify_cover(code, w)
        return verdict_status(v), v, [verdict_line(v)], False
    if name == "homogeneity":
        bad = list(bar.homogeneity_failures(code, w))
        v = bar.PASS if not bad else bar.Fail(bad[0])
        return verdict_status(v), {"failures": bad}, [verdict_line(v)], False
    if name == "first-segment":
        s = bar.first_segment(code, read_set(o["set"]), cfg.fuel)
        return "ok", {"segment": s}, [",".join(map(str, s))], False
    if name == "uniformize":
        d, chosen = bar.uniformize_rank_omega(code, w)
        return "ok", {"set": d.to_json(), "chosen": chosen}, [str(d)], False
    raise UsageError(name)


def cmd_ramsey(cfg: RunConfig, o: dict):
    code = read_code(o["code"])
    w = cfg.window
    name = cfg.command.split()[-1]
    if name == "search":
        col = read_coloring(o["coloring"])
        wit = ram.nash_williams_search(code, col, w, o["target"], strategy=o["strategy"])
        v = ram.verify_monochrome(code, col, wit)
        return verdict_status(v), {"witness": wit, "verified": v}, \
            [f"set {list(wit.set)} colour {wit.color}", verdict_line(v)], True
    cols = [read_coloring(c) for c in o["colorings"].split(";") if c.strip()]
    if name == "almost":
        wits = ram.almost_monochromatic_search(code, cols, w, o["target"], o["discard"])
        v = ram.verify_almost(code, cols, wits)
        lines = [f"{c.describe()}: colour {x.color} after dropping {x.discarded_prefix}"
                 for c, x in zip(cols, wits)]
        return verdict_status(v), {"witnesses": wits, "verified": v}, \
            [f"set {list(wits[0].set)}"] + lines + [verdict_line(v)], True
    if name == "diagonal":
        res = ram.diagonal_monochromatic(code, cols, w)
        v = ram.verify_almost(code, cols, res.witnesses())
        return verdict_status(v), {"diagonal": res, "verified": v}, \
            [f"set {list(res.set)} colours {list(res.colors)}", verdict_line(v)], True
    raise UsageError(name)


def cmd_embed(cfg: RunConfig, o: dict):
    codeB, codeC = read_code(o["B"]), read_code(o["C"])
    w = cfg.window
    name = cfg.command.split()[-1]
    if name == "compare":
        c = emb.compare_embedding(codeB, codeC, w)
        status = "ok" if c.kind != "Undecided" else "not-found"
        return status, c, [f"{c.kind} {list(c.witness)}"], False
    if name == "synthesize":
        if o.get("rank_omega"):
            wit = emb.double_arrow_witness_rank_omega(codeB, w)
        else:
            wit = emb.double_arrow_witness(codeB, codeC, o["steps"], cfg.fuel)
        bps = ",".join(map(str, wit.breakpoints))
        return "ok", wit, [f"breakpoints {bps}", f"log entries {len(wit.phase_log)}"], False
    if name == "verify":
        data = read_json(o["witness"])
        if data.get("tool") == "barriers":  # a full synthesize report
            data = data["result"]
        wit = emb.DoubleArrowWitness.from_json(data)
        v = emb.verify_double_arrow(wit, codeB, codeC, w, o.get("samples"), cfg.seed)
        log = emb.recheck_phase_log(wit, codeB, codeC)
        both = v if not v.ok else log
        seeded = o.get("samples") is not None
        return verdict_status(both), {"thinned": v, "phase_log": log}, \
            [f"thinned sets: {verdict_line(v)}", f"phase log: {verdict_line(log)}"], seeded
    raise UsageError(name)


def cmd_ideals(cfg: RunConfig, o: dict):
    w = cfg.window
    name = cfg.command.split()[-1]
    if name == "avoid":
        code = read_code(o["code"])
        desc = idl.FinDescriptor.from_json(read_json(o["desc"]))
        h = idl.hechler_avoiding(code, desc, w)
        v = idl.verify_avoiding(code, desc, h, w)
        return verdict_status(v), {"tree": h, "verified": v}, \
            [f"root threshold {h.threshold(())}", verdict_line(v)], False
    if name == "dominate":
        code = read_code(o["code"])
        trees = [idl.HechlerTree.from_json(t) for t in read_json(o["trees"])]
        d = idl.hechler_dominating(trees, code, w)
        return "ok", d, [f"root threshold {d.tree.threshold(())}",
                         f"bounds {list(d.bounds)}"], False
    if name == "shrink":
        codeB, codeC = read_code(o["B"]), read_code(o["C"])
        f = read_map(o["map"], codeB, codeC, w)
        fn = idl.katetov_shrink_bruteforce if o.get("brute") else idl.katetov_shrink_recursive
        cert = fn(codeB, codeC, f, w, o["target"])
        v = idl.verify_shrink(cert, codeB, codeC, f)
        return verdict_status(v), {"certificate": cert, "verified": v}, \
            [f"{cert.kind} via {cert.route}", f"X {list(cert.x)}", verdict_line(v)], \
            o["map"].startswith(("random", "spread"))
    if name == "stage":
        codeC = read_code(o["code"])
        codeB = read_code(o["B"])
        grid = read_grid(o["grid"])
        shrink_w = Window(o["map_bound"])
        fam, imgs, stages = [], [], []
        for a in range(o["stages"]):
            f = idl.random_map(codeB, codeC, shrink_w, cfg.seed + a, spread=True)
            cert = idl.katetov_shrink_recursive(codeB, codeC, f, shrink_w, o["target"])
            st = idl.ad_stage(codeC, fam, imgs, grid[a % len(grid)], w,
                              current=(cert, codeB, f), need=o["need"])
            stages.append(st)
            fam.append(st.a_new)
            imgs.append((cert, cert.image(codeB, f)))
        v = idl.verify_noCseq_hypotheses(codeC, fam, w, grid)
        ok = v.ok and all(st.ok for st in stages)
        lines = [f"stage {i}: {len(st.a_new)} elements, clauses "
                 f"{'ok' if st.ok else 'FAILED'}" for i, st in enumerate(stages)]
        return ("pass" if ok else "fail"), {"stages": stages, "family": fam, "verified": v}, \
            lines + [verdict_line(v)], True
    if name == "verify":
        codeC = read_code(o["code"])
        fam = read_json(o["family"])
        v = idl.verify_noCseq_hypotheses(codeC, fam, w, read_grid(o["grid"]))
        return verdict_status(v), v, [verdict_line(v)], False
    raise UsageError(name)


GROUPS = {"barrier": cmd_barrier, "ramsey": cmd_ramsey, "embed": cmd_embed, "ideals": cmd_ideals}


def run(cfg: RunConfig) -> tuple:
    """Execute one command; returns (exit status, report text)."""
    group = cfg.command.split()[0]
    try:
        status, result, lines, seeded = GROUPS[group](cfg, cfg.options)
    except (bar.FuelExhausted, idl.WindowExhausted, Exhausted) as exc:
        status, result, lines, seeded = "exhausted", {"error": str(exc)}, [f"exhausted: {exc}"], False
    except (ram.NotFoundInWindow,) as exc:
        status, result, lines, seeded = "not-found", {"error": str(exc)}, [f"not found: {exc}"], False
    if cfg.fmt == "json":
        report = {"tool": "barriers", "command": cfg.command, "seed": cfg.seed,
                  "window": {"bound": cfg.bound, "depth": cfg.depth},
                  "status": status, "result": plain(result)}
        jsonschema.validate(report, REPORT_SCHEMA)
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        head = [f"# seed={cfg.seed}"] if seeded else []
        text = "\n".join(head + lines) + "\n"
    return EXIT[status], text


# argument parsing ---------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--bound", type=int, default=12)
    p.add_argument("--depth", type=int, default=0, help="default: bound")
    p.add_argument("--fuel", type=int, default=0, help="default: 10 * bound")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="barriers", description=__doc__.splitlines()[0])
    groups = ap.add_subparsers(dest="group", required=True)

    g = groups.add_parser("barrier").add_subparsers(dest="cmd", required=True)
    for name in ("rank", "truncated-rank", "elements", "verify-sperner", "verify-cover",
                 "homogeneity", "uniformize"):
        p = g.add_parser(name)
        p.add_argument("--code", required=True)
        _common(p)
    for name in ("contains", "sub-barrier", "first-segment"):
        p = g.add_parser(name)
        p.add_argument("--code", required=True)
        p.add_argument("--set", required=True)
        _common(p)

    g = groups.add_parser("ramsey").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("search")
    p.add_argument("--code", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--target", type=int, default=3)
    p.add_argument("--strategy", choices=("prune", "brute"), default="prune")
    _common(p)
    for name in ("almost", "diagonal"):
        p = g.add_parser(name)
        p.add_argument("--code", required=True)
        p.add_argument("--colorings", required=True, help="';'-separated")
        p.add_argument("--target", type=int, default=3)
        p.add_argument("--discard", type=int, default=1)
        _common(p)

    g = groups.add_parser("embed").add_subparsers(dest="cmd", required=True)
    for name in ("compare", "synthesize", "verify"):
        p = g.add_parser(name)
        p.add_argument("--B", required=True)
        p.add_argument("--C", required=True)
        if name == "synthesize":
            p.add_argument("--steps", type=int, default=8)
            p.add_argument("--rank-omega", action="store_true")
        if name == "verify":
            p.add_argument("--witness", required=True)
            p.add_argument("--samples", type=int)
        _common(p)

    g = groups.add_parser("ideals").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("avoid")
    p.add_argument("--code", required=True)
    p.add_argument("--desc", required=True, help="FIN descriptor as JSON")
    _common(p)
    p = g.add_parser("dominate")
    p.add_argument("--code", required=True)
    p.add_argument("--trees", required=True, help="JSON list of trees")
    _common(p)
    p = g.add_parser("shrink")
    p.add_argument("--B", required=True)
    p.add_argument("--C", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--target", type=int, default=3)
    p.add_argument("--brute", action="store_true")
    _common(p)
    p = g.add_parser("stage")
    p.add_argument("--code", required=True, help="the barrier C")
    p.add_argument("--B", default="uniform(1)")
    p.add_argument("--grid", default="omega;evens;odds")
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--need", type=int, default=4)
    p.add_argument("--target", type=int, default=3)
    p.add_argument("--map-bound", type=int, default=12)
    _common(p)
    p = g.add_parser("verify")
    p.add_argument("--code", required=True)
    p.add_argument("--family", required=True, help="JSON list of lists of sets")
    p.add_argument("--grid", required=True)
    _common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    skip = {"group", "cmd", "bound", "depth", "fuel", "format", "seed", "out"}
    opts = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(f"{ns.group} {ns.cmd}", ns.bound, ns.depth, ns.fuel, ns.format,
                     ns.seed, ns.out, opts)


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        code, text = run(cfg)
    except (UsageError, bar.CodeSyntaxError, bar.BarrierError, ram.RamseyError,
            ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"barriers: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
