"""Command line: ``latfrob {witt,jet,lateral,verify} ...``.

Exit codes: 0 success, 1 verification or integrity failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from . import witt as W
from .cache import TableStore
from .config import RunConfig, load_config_file
from .errors import IntegrityError, NotInImage, VerificationFailure
from .jets import jet_ring
from .jets import to_json as jet_json
from .lateral import (
    compare_maps,
    descend,
    display_gen,
    lateral_map_affine_space,
    verify_lift_of_frobenius,
    witt_frobenius_formula_map,
)
from .poly import MultiPoly, parse_poly
from .rings import coeff_ring_make
from .suites import SUITES, dumps, run_suites

WITT_SUBOPS = ("polys", "ghost", "unghost", "arith", "frobenius", "teichmuller", "expdelta")
TABLE_NAMES = {"add": "S", "mul": "P", "neg": "N", "frobenius": "F"}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--mode", choices=("char-zero", "char-p"), default=S)
    p.add_argument("--p", type=int, default=S, help="residue characteristic")
    p.add_argument("--e", type=int, default=S, help="q = p^e")
    p.add_argument("--K", type=int, default=S, help="truncation depth of the point rings")
    p.add_argument("--n", type=int, default=S, help="jet / Witt order")
    p.add_argument("--scheme", default=S, help="ga, gm, weierstrass(a,b) or 'vars x,y; rel <poly>'")
    p.add_argument("--point", default=S, help="comma separated base point (constant S)")
    p.add_argument("--s-kind", dest="s_kind", choices=("constant", "canonical"), default=S)
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--cache-dir", dest="cache_dir", default=S)
    p.add_argument("--output", choices=("human", "json"), default=S)
    p.add_argument("--config", default=None, help="key = value file or JSON object; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latfrob", description="Witt vectors, arithmetic jets and the lateral Frobenius.")
    sub = parser.add_subparsers(dest="command", required=True)

    pw = sub.add_parser("witt", help="Witt vector tables and arithmetic")
    pw.add_argument("subop", choices=WITT_SUBOPS)
    pw.add_argument("--op", default="add", choices=("add", "mul", "neg", "frobenius"))
    pw.add_argument("--u", help="Witt coordinates, comma separated")
    pw.add_argument("--v", help="second operand for arith")
    pw.add_argument("--w", help="ghost components for unghost")
    pw.add_argument("--a", help="ring element for teichmuller")
    pw.add_argument("--r", help="ring element for expdelta")
    pw.add_argument("--ring", default="integers", help="integers, mod, Fq[t], Fq[t]/tK")
    _common(pw)

    pj = sub.add_parser("jet", help="print a jet ring presentation")
    _common(pj)

    pl = sub.add_parser("lateral", help="lateral Frobenius images, comparison and certificate")
    _common(pl)

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("--suite", default="all", choices=("all",) + SUITES)
    _common(pv)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            values.update(load_config_file(args.config))
        except (OSError, ValueError) as exc:
            raise UsageError(f"config file: {exc}") from exc
    names = {f.name for f in dataclasses.fields(RunConfig)}
    values.update({k: v for k, v in vars(args).items() if k in names})
    return RunConfig(**values)


# -- witt ------------------------------------------------------------------------

def _elems(text: str, ring, what: str) -> list:
    if not text:
        raise UsageError(f"--{what} is required")
    out = []
    for t in text.split(","):
        f = parse_poly(t, ring)
        if not f.is_constant():
            raise UsageError(f"--{what}: {t!r} is not a ring element")
        out.append(f.constant_term())
    return out


def _etext(ring, c) -> str:
    return str(MultiPoly.const(ring, c))


def _vec_text(ring, cs) -> str:
    return "(" + ", ".join(_etext(ring, c) for c in cs) + ")"


def cmd_witt(args, cfg: RunConfig) -> tuple[int, dict, str]:
    setup = cfg.setup()
    if args.subop == "polys":
        table = W.witt_table(setup, cfg.n, args.op)
        name = TABLE_NAMES[args.op]
        lines = [f"{name}_{i} = {f}" for i, f in enumerate(table.polys)]
        return 0, table.to_json(), "\n".join(lines)
    ring = coeff_ring_make(setup, args.ring)
    doc = {"schema_version": 1, "kind": f"witt-{args.subop}", "ring": ring.descriptor}
    if args.subop == "unghost":
        w = _elems(args.w, ring, "w")
        u = W.unghost(w, setup, ring)
        doc["coords"] = [_etext(ring, c) for c in u.coords]
        return 0, doc, str(u)
    if args.subop == "teichmuller":
        a = _elems(args.a, ring, "a")[0]
        u = W.teichmuller(a, cfg.n, setup, ring)
        doc.update(coords=[_etext(ring, c) for c in u.coords], ghost=[_etext(ring, c) for c in W.ghost(u)])
        return 0, doc, f"{u}  ghost {_vec_text(ring, W.ghost(u))}"
    if args.subop == "expdelta":
        r = _elems(args.r, ring, "r")[0]
        u = W.exp_delta(r, cfg.n, setup, ring)
        doc["coords"] = [_etext(ring, c) for c in u.coords]
        return 0, doc, str(u)
    u = W.WittVec(setup, ring, tuple(_elems(args.u, ring, "u")))
    if args.subop == "ghost":
        g = W.ghost(u)
        doc["ghost"] = [_etext(ring, c) for c in g]
        return 0, doc, _vec_text(ring, g)
    if args.subop == "frobenius":
        f = W.frobenius(u)
        doc["coords"] = [_etext(ring, c) for c in f.coords]
        return 0, doc, str(f)
    # arith
    if args.op == "frobenius":
        raise UsageError("arith takes --op add, mul or neg")
    v = W.WittVec(setup, ring, tuple(_elems(args.v, ring, "v"))) if args.op != "neg" else None
    res = W.witt_arith(args.op, u, v)
    doc.update(op=args.op, coords=[_etext(ring, c) for c in res.coords])
    return 0, doc, str(res)


# -- jet / lateral -----------------------------------------------------------------

def cmd_jet(args, cfg: RunConfig) -> tuple[int, dict, str]:
    setup = cfg.setup()
    X = cfg.presentation(setup)
    J = jet_ring(X, cfg.n, setup)
    lines = ["vars: " + ", ".join(str(v) for v in J.gens), f"relations ({len(J.relations)}):"]
    lines += [f"  {f}" for f in J.relations]
    return 0, jet_json(J), "\n".join(lines)


def cmd_lateral(args, cfg: RunConfig) -> tuple[int, dict, str]:
    setup = cfg.setup()
    X = cfg.presentation(setup)
    S = cfg.prolong_seq(setup, X)
    if X.relations:
        m = descend(X, cfg.n, S, trials=cfg.trials, seed=cfg.seed)
    else:
        m = lateral_map_affine_space(X, cfg.n, S)
    closed = witt_frobenius_formula_map(m.X, cfg.n, S)
    diff = {k: str(v) for k, v in compare_maps(m, closed).items()}
    lift = verify_lift_of_frobenius(m, points=cfg.trials, seed=cfg.seed)
    doc = m.to_json()
    doc.update(closed_formula=closed.image_texts(), discrepancy=diff, lift_congruence=lift["ok"])
    lines = [f"lateral Frobenius n={m.n} S={S.describe()} construction={m.construction}"]
    if not m.images:
        lines.append("  (no generators)")
    for g in m.source.gens:
        lines.append(f"  {display_gen(g, m.X)} |-> {m.images[g]}")
    lines.append("discrepancy against the closed formula: " +
                 (", ".join(f"{k}: {v}" for k, v in diff.items()) if diff else "none"))
    lines.append(f"lift congruence: {'pass' if lift['ok'] else 'FAIL'}")
    lines.append(f"certificate: {m.certificate['kind']}")
    for k, v in sorted(m.certificate["detail"].items()):
        lines.append(f"  {k}: {v}")
    return (0 if lift["ok"] else 1), doc, "\n".join(lines)


def cmd_verify(args, cfg: RunConfig) -> tuple[int, dict, str]:
    reports = run_suites(cfg, args.suite)
    ok = all(r.ok for r in reports)
    config = {k: v for k, v in cfg.to_json().items() if k not in ("cache_dir", "output")}
    doc = {"schema_version": 1, "kind": "verification", "config": config, "status": "pass" if ok else "fail",
           "reports": [r.to_json() for r in reports]}
    lines = []
    for r in reports:
        line = f"{r.status.upper():7} {r.suite}"
        if r.status == "skipped":
            line += f"  ({r.detail.get('notice', '')})"
        elif r.witnesses:
            line += f"  witness: {r.witnesses[0]}"
        lines.append(line)
    lines.append(f"overall: {'pass' if ok else 'FAIL'}")
    return (0 if ok else 1), doc, "\n".join(lines)


COMMANDS = {"witt": cmd_witt, "jet": cmd_jet, "lateral": cmd_lateral, "verify": cmd_verify}


def _emit(output: str, doc: dict, text: str, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write((dumps(doc) if output == "json" else text) + "\n")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on bad flags
    output = getattr(args, "output", "human")
    try:
        cfg = make_config(args)
        output = cfg.output
        W.set_table_store(TableStore(cfg.cache_dir))
        code, doc, text = COMMANDS[args.command](args, cfg)
    except (UsageError, SyntaxError, ValueError, TypeError) as exc:
        if isinstance(exc, NotInImage):
            return _fail(output, exc, 1)
        return _fail(output, exc, 2)
    except (IntegrityError, VerificationFailure) as exc:
        return _fail(output, exc, 1)
    finally:
        W.set_table_store(None)
    _emit(output, doc, text)
    return code


def _fail(output: str, exc: Exception, code: int) -> int:
    doc = {"schema_version": 1, "error": type(exc).__name__, "message": str(exc),
           "witness": getattr(exc, "witness", None)}
    if isinstance(exc, NotInImage):
        doc["index"] = exc.index
    if output == "json":
        _emit(output, doc, "")
    else:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        if doc["witness"] is not None:
            sys.stderr.write(f"witness: {doc['witness']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
