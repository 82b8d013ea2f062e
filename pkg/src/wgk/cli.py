"""
Command-line front end.

    wgk compute --group A2 --weights equal --instance regular --out P
    wgk verify --instance B2-regular-12
    wgk list-instances
    wgk export --instance A2-deodhar-psi-s2 --dir out/

Exit codes: 0 success, 1 a mathematical check failed (a JSON failure report is
printed), 2 bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .cache import IDENTITIES, TableCache, content_key, revalidate, tables_from_json, tables_to_json
from .checks import Report
from .ideal import NotSuffixClosed, PatternMismatch, PosViolation, SeedNotBarInvariant
from .instances import CATALOG
from .linalg import NotFree
from .laurent import poly_to_csv, poly_to_json
from .pipeline import TABLE_NAMES, compute_tables, make_instance, verify_tables, wgraph

__all__ = ["RunConfig", "ConfigError", "main", "cmd_compute", "cmd_verify", "OUTPUTS", "FORMATS"]

EXIT_OK, EXIT_MATH, EXIT_CONFIG = 0, 1, 2

VECTOR_OUTPUTS = ("C", "Cprime", "D", "Dprime")
OUTPUTS = TABLE_NAMES + VECTOR_OUTPUTS + ("mu", "wgraph", "pi_tables", "inversion_report")
FORMATS = ("json", "csv", "dot")
# outputs that need the twisted (finite) pipeline
FINITE_OUTPUTS = ("pi_tables", "inversion_report")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    group: str | dict
    weights: str | dict
    instance: str
    outputs: tuple = ("P",)
    formats: tuple = ("json",)
    cache_dir: str | None = None
    out_dir: str | None = None
    label: str = ""
    rng_seed: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad:
            raise ConfigError(f"unknown outputs {bad}; choose from {', '.join(OUTPUTS)}")
        bad = [f for f in self.formats if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown export formats {bad}; choose from {', '.join(FORMATS)}")

    def build(self):
        """The Instance, or ConfigError for anything that does not parse."""
        try:
            return make_instance(self.group, self.weights, self.instance)
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"{type(exc).__name__}: {exc}") from exc

    @staticmethod
    def key_config(inst) -> dict:
        """Normalized (group, weights, instance) used for the content hash."""
        W = inst.W
        return {"group": {"m": W.m}, "weights": inst.H.L.to_config(W), "instance": inst.name}


def _parse_json_or_text(text: str):
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad JSON: {exc}") from exc
    return text


def _split(text: str | None, default: tuple) -> tuple:
    if not text:
        return default
    return tuple(p.strip() for p in text.split(",") if p.strip())


def resolve(args: argparse.Namespace) -> list[RunConfig]:
    """One RunConfig per requested instance (catalog names expand to group and weights)."""
    outputs = _split(getattr(args, "out", None), getattr(args, "default_out", ("P",)))
    if "all" in outputs:
        outputs = OUTPUTS
    formats = _split(getattr(args, "export", None), ("json",))
    cache_dir = args.cache_dir or os.environ.get("WGK_CACHE_DIR")
    names = list(args.instance or [])
    if getattr(args, "all", False):
        names = list(CATALOG)
    if not names:
        raise ConfigError("no --instance given")
    cfgs = []
    for name in names:
        if name in CATALOG and args.group is None:
            group, weights, inst_name = CATALOG[name]
            label = name
        else:
            if args.group is None:
                raise ConfigError(f"{name!r} is not a catalog name and no --group was given")
            group, weights, inst_name = args.group, args.weights or "equal", name
            label = ""
        if args.weights is not None:
            weights = args.weights
        cfgs.append(RunConfig(_parse_json_or_text(group), _parse_json_or_text(weights), inst_name,
                              outputs, formats, cache_dir, args.dir, label, args.seed))
    return cfgs


# ---------------------------------------------------------------- tables

def load_or_compute(cfg: RunConfig, inst, strict: bool = False):
    """
    Tables for ``inst``, served from the cache when possible.  Cached tables are
    revalidated against one random identity; on failure they are recomputed, or
    with ``strict`` returned as they are so that verification reports the fault.
    Returns (tables, status) with status in {"computed", "cached", "stale"}.
    """
    cache = TableCache(cfg.cache_dir) if cfg.cache_dir else None
    key = content_key(cfg.key_config(inst))
    data = cache.load(key) if cache else None
    if data is not None:
        try:
            given = tables_from_json(data, inst.W)
        except (ValueError, KeyError) as exc:
            data, status = None, f"unreadable: {exc}"
        else:
            mu = given.pop("mu", None)
            t = compute_tables(inst, given)
            t.mu = mu
            name, diff = revalidate(t.matrices(), random.Random(cfg.rng_seed))
            t.extra["revalidation"] = {"identity": name, "ok": diff is None}
            if diff is None or strict:
                return t, "cached" if diff is None else "stale"
    t = compute_tables(inst)
    if cache:
        wgraph(t)  # fills mu
        cache.store(key, tables_to_json(t, cfg.key_config(inst)))
    return t, "computed"


def sanity_report(t) -> Report:
    """Cheap identities run after every compute."""
    rep = Report(f"{t.instance.name} sanity")
    m = t.matrices()
    W = t.W
    for name in sorted(IDENTITIES):
        d = IDENTITIES[name](m)
        rep.compare(name, [(None if d is None else [W.word_str(d[0]), W.word_str(d[1])],
                            None if d is None else d[2], None if d is None else d[3])])
    return rep


# ---------------------------------------------------------------- exports

def _matrix_csv(M, lab) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "poly"])
    for x, y, a in M.entries():
        w.writerow([lab(x), lab(y), poly_to_csv(a)])
    return buf.getvalue()


def _vectors_json(vecs: dict, index, lab) -> dict:
    pos = {w: i for i, w in enumerate(index)}
    return {lab(w): {lab(y): poly_to_json(a) for y, a in sorted(v.items(), key=lambda t: pos.get(t[0], 0))
                     if a}
            for w, v in sorted(vecs.items(), key=lambda t: pos[t[0]])}


def _vectors_csv(vecs: dict, index, lab) -> str:
    pos = {w: i for i, w in enumerate(index)}
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["w", "y", "poly"])
    for w in sorted(vecs, key=pos.get):
        for y, a in sorted(vecs[w].items(), key=lambda t: pos.get(t[0], 0)):
            if a:
                wr.writerow([lab(w), lab(y), poly_to_csv(a)])
    return buf.getvalue()


def _mu_rows(t):
    W = t.W
    pos = t.M.ideal.pos
    for (s, x, y), a in sorted(t.mu.items(), key=lambda kv: (kv[0][0], pos[kv[0][1]], pos[kv[0][2]])):
        yield W.gens[s], W.word_str(x), W.word_str(y), a


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def render(t, outputs, formats) -> dict:
    """{filename: text} for every requested (output, format) pair that applies."""
    from .dual import D_basis, D_prime
    from .finite import run_finite
    from .klpoly import compute_C, compute_C_prime

    W = t.W
    lab = W.word_str
    files = {}
    want = lambda fmt: fmt in formats
    bases = {}
    if any(o in outputs for o in ("C", "Cprime")):
        C = compute_C(t.M, t.P)
        Ct = compute_C(t.Mt, t.Pt)
        Cp, _ = compute_C_prime(t.M, t.Mt, C, Ct)
        bases.update(C=C, Cprime=Cp)
    if "D" in outputs:
        bases["D"] = D_basis(t.Q)
    if "Dprime" in outputs:
        bases["Dprime"] = D_prime(t.Q, W)
    fin = None
    if any(o in outputs for o in FINITE_OUTPUTS):
        fin = run_finite(t.M, t.Mt, t.R, t.Rt, t.P, t.Pt, t.Q, t.Qt, t.mu)
    for o in outputs:
        if o in TABLE_NAMES:
            M = getattr(t, o)
            if want("json"):
                files[f"{o}.json"] = _dumps(M.to_json(lab))
            if want("csv"):
                files[f"{o}.csv"] = _matrix_csv(M, lab)
        elif o in VECTOR_OUTPUTS:
            vecs = bases[o]
            if want("json"):
                files[f"{o}.json"] = _dumps(_vectors_json(vecs, t.M.E, lab))
            if want("csv"):
                files[f"{o}.csv"] = _vectors_csv(vecs, t.M.E, lab)
        elif o == "mu":
            rows = list(_mu_rows(t))
            if want("json"):
                files["mu.json"] = _dumps([{"s": s, "x": x, "y": y, "poly": poly_to_json(a)}
                                           for s, x, y, a in rows])
            if want("csv"):
                buf = io.StringIO()
                wr = csv.writer(buf, lineterminator="\n")
                wr.writerow(["s", "x", "y", "poly"])
                wr.writerows((s, x, y, poly_to_csv(a)) for s, x, y, a in rows)
                files["mu.csv"] = buf.getvalue()
        elif o == "wgraph":
            g = wgraph(t)
            if want("json"):
                files["wgraph.json"] = _dumps(g.to_json())
            if want("dot"):
                files["wgraph.dot"] = g.to_dot()
        elif o == "pi_tables":
            plab = lambda w: lab(w) + "'"
            tabs = {k: fin.get(k) for k in ("Rpi", "Rtpi", "Ppi", "Ptpi", "Qpi")}
            if want("json"):
                files["pi_tables.json"] = _dumps(
                    {"applicable": fin["report"].info.get("finite_applicable", False),
                     **{k: (v.to_json(plab) if v is not None else None) for k, v in tabs.items()}})
            if want("csv"):
                for k, v in tabs.items():
                    if v is not None:
                        files[f"{k}.csv"] = _matrix_csv(v, plab)
        elif o == "inversion_report":
            rep = fin["report"]
            if want("json"):
                files["inversion_report.json"] = _dumps(_json_safe(rep.to_json()))
    return files


def _json_safe(obj):
    return json.loads(json.dumps(obj, default=str))


def emit(files: dict, out_dir: str | None, prefix: str = "") -> None:
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            (d / f"{prefix}{name}").write_text(text)
        return
    if len(files) == 1:
        sys.stdout.write(next(iter(files.values())))
        return
    for name, text in files.items():
        sys.stdout.write(f"==> {prefix}{name} <==\n{text}")


# ---------------------------------------------------------------- commands

def cmd_compute(cfg: RunConfig) -> tuple[int, dict, dict]:
    """(exit code, files, status); status carries the sanity report."""
    inst = cfg.build()
    t, how = load_or_compute(cfg, inst)
    rep = sanity_report(t)
    status = {"instance": cfg.label or inst.name, "source": how, "ok": rep.ok}
    if not rep.ok:
        status["report"] = rep.to_json()
        return EXIT_MATH, {}, status
    if t.mu is None:
        wgraph(t)
    return EXIT_OK, render(t, cfg.outputs, cfg.formats), status


def cmd_verify(cfg: RunConfig) -> tuple[int, Report]:
    inst = cfg.build()
    t, how = load_or_compute(cfg, inst, strict=True)
    rep = verify_tables(t)
    rep.info["source"] = how
    if "revalidation" in t.extra:
        rep.info["revalidation"] = t.extra["revalidation"]
    return (EXIT_OK if rep.ok else EXIT_MATH), rep


# raised when a seed does not realize a W-graph ideal: a mathematical failure, not a config one
REALIZATION_ERRORS = (PatternMismatch, NotFree, NotSuffixClosed, PosViolation, SeedNotBarInvariant)


def _failure(cfg, exc) -> dict:
    return {"instance": cfg.label or cfg.instance, "ok": False,
            "error": {"type": type(exc).__name__, "message": str(exc)}}


def _run_compute(cfg):
    try:
        return cmd_compute(cfg)
    except ConfigError as exc:
        return EXIT_CONFIG, {}, {"error": str(exc)}
    except REALIZATION_ERRORS as exc:
        return EXIT_MATH, {}, _failure(cfg, exc)


def _run_verify(cfg):
    try:
        code, rep = cmd_verify(cfg)
        return code, _json_safe(rep.to_json()), rep.summary()
    except ConfigError as exc:
        return EXIT_CONFIG, {"error": str(exc)}, f"config error: {exc}"
    except REALIZATION_ERRORS as exc:
        data = _failure(cfg, exc)
        return EXIT_MATH, data, f"{data['instance']}: FAIL ({type(exc).__name__}: {exc})"


def _map(fn, cfgs, jobs):
    if jobs and jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, cfgs))
    return [fn(c) for c in cfgs]


def _prefix(cfg, many):
    return f"{cfg.label or cfg.instance}/" if many else ""


def run_compute(args) -> int:
    cfgs = resolve(args)
    results = _map(_run_compute, cfgs, args.jobs)
    worst = 0
    many = len(cfgs) > 1
    for cfg, (code, files, status) in zip(cfgs, results):
        worst = max(worst, code)
        if code == EXIT_OK:
            emit(files, cfg.out_dir, _prefix(cfg, many))
        else:
            print(_dumps(status), end="")
        print(f"{status.get('instance', cfg.instance)}: {status.get('source', 'error')}",
              file=sys.stderr)
    return worst


def run_verify(args) -> int:
    cfgs = resolve(args)
    results = _map(_run_verify, cfgs, args.jobs)
    worst = 0
    for cfg, (code, data, summary) in zip(cfgs, results):
        worst = max(worst, code)
        if args.json:
            print(_dumps(data), end="")
        else:
            print(summary)
        if cfg.out_dir:
            d = Path(cfg.out_dir)
            d.mkdir(parents=True, exist_ok=True)
            (d / f"{(cfg.label or cfg.instance).replace(':', '_')}.report.json").write_text(_dumps(data))
    return worst


def run_list(args) -> int:
    rows = [{"name": k, "group": g, "weights": w, "instance": i} for k, (g, w, i) in CATALOG.items()]
    if args.json:
        print(_dumps(rows), end="")
    else:
        for r in rows:
            print(f"{r['name']:28s} {r['group']:6s} {r['weights']:6s} {r['instance']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wgk", description="Compute and verify W-graph ideal "
                                "tables for weighted Coxeter groups.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, default_out):
        sp.add_argument("--group", help="group name (A2, B3, I2(5), A1xA1) or JSON config")
        sp.add_argument("--weights", help="'equal', comma-separated integers, or JSON config")
        sp.add_argument("--instance", action="append",
                        help="instance name (regular, deodhar:psi:J=s2, ...) or catalog name; repeatable")
        sp.add_argument("--all", action="store_true", help="every catalog instance")
        sp.add_argument("--cache-dir", help="table cache directory (default: $WGK_CACHE_DIR)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes across instances")
        sp.add_argument("--dir", help="write files here instead of stdout")
        sp.add_argument("--seed", type=int, help="seed for the cache revalidation choice")
        sp.set_defaults(default_out=default_out)

    c = sub.add_parser("compute", help="compute tables and print or write the requested outputs")
    common(c, ("P",))
    c.add_argument("--out", help=f"comma-separated outputs from {', '.join(OUTPUTS)} or 'all'")
    c.add_argument("--export", help="comma-separated formats from json, csv, dot")

    e = sub.add_parser("export", help="like compute, but every output by default")
    common(e, OUTPUTS)
    e.add_argument("--out", help="comma-separated outputs (default: all)")
    e.add_argument("--export", help="comma-separated formats (default: json)")

    v = sub.add_parser("verify", help="run every applicable identity suite")
    common(v, ())
    v.add_argument("--json", action="store_true", help="print the JSON report")

    ls = sub.add_parser("list-instances", help="show the instance catalog")
    ls.add_argument("--json", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "list-instances":
            return run_list(args)
        if args.cmd == "verify":
            return run_verify(args)
        return run_compute(args)
    except ConfigError as exc:
        print(f"wgk: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
