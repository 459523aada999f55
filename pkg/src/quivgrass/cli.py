"""Command line entry point.

Exit codes: 0 when every check passes, 1 on invalid input, 2 on a
mathematical mismatch, 3 when an enumeration budget is exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import BudgetExceeded
from .ffla import DEFAULT_BUDGET
from .grass import connectivity_check, grassmannian_points, lemma2_transport
from .meataxe import label_simples_by_vertex, simples_of
from .modrep import DimensionVector, load_representation
from .pipelines import TwoGenModule, TwoGenPresentation, auslander_pipeline, verify_realization
from .polyvar import load_variety
from .qalg import load_algebra

log = logging.getLogger("quivgrass")

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _read(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _module_at(path: str, q: int | None):
    data = _read(path)
    return load_representation(data, p=q)


def cmd_realize(args) -> tuple[dict, bool]:
    polys, n, p = load_variety(_read(args.variety))
    qs = _ints(args.q) if args.q else [p]
    rep = verify_realization(polys, n, qs, budget=args.budget)
    return rep.to_json(), rep.ok


def cmd_grassmannian(args) -> tuple[dict, bool]:
    out = []
    for q in _ints(args.q) if args.q else [None]:
        m = _module_at(args.module, q)
        pts = grassmannian_points(m, _ints(args.e), budget=args.budget)
        out.append({"q": m.p, "e": pts.e.to_json(), "count": len(pts), "bases": [u.basis.tolist() for u in pts]})
    return {"results": out}, True


def cmd_connectivity(args) -> tuple[dict, bool]:
    out, ok = [], True
    for q in _ints(args.q) if args.q else [None]:
        m = _module_at(args.module, q)
        i_list = _ints(args.i) if args.i else list(range(m.dim + 1))
        for i in i_list:
            rep = connectivity_check(m, i, budget=args.budget)
            out.append({"q": m.p, **rep.to_json()})
            ok = ok and rep.connected
    return {"results": out, "ok": ok}, ok


def cmd_auslander(args) -> tuple[dict, bool]:
    gamma = TwoGenPresentation.from_json(_read(args.gamma))
    mod_data = _read(args.module)
    out, ok = [], True
    for q in _ints(args.q) if args.q else [gamma.p]:
        g_at = gamma.at(q)
        m = TwoGenModule.from_json({**mod_data, "p": q}, g_at)
        rep = auslander_pipeline(g_at, m, int(args.g), seed=args.seed, budget=args.budget)
        out.append(rep)
        ok = ok and rep["ok"]
    return {"results": out, "ok": ok}, ok


def cmd_lemma2(args) -> tuple[dict, bool]:
    alg = load_algebra(_read(args.algebra))
    m = load_representation(_read(args.module), algebra=alg)
    sc = alg.sc
    n = m.to_sc_module()
    simples = simples_of(sc, args.seed)
    label_simples_by_vertex(alg, simples)
    idem = np.zeros(sc.dim, dtype=np.int64)
    for v in args.idem.split(","):
        if v.strip():
            idem = (idem + alg.idempotent(v.strip())) % alg.p
    g = DimensionVector(dict(zip(alg.vertices, _ints(args.g))), keys=simples.labels)
    rep = lemma2_transport(sc, idem, n, g, simples, independent=not args.forward_only, seed=args.seed, budget=args.budget)
    return rep.to_json(), rep.ok


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quivgrass", description="Quiver Grassmannians over finite fields")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("--json-out", type=Path, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("realize", help="variety as a quiver Grassmannian, checked over F_q")
    r.add_argument("variety")
    r.add_argument("--q", default=None, help="comma separated primes")
    r.set_defaults(func=cmd_realize)

    g = sub.add_parser("grassmannian", help="enumerate submodules with a dimension vector")
    g.add_argument("module")
    g.add_argument("--e", required=True, help="comma separated, in vertex order")
    g.add_argument("--q", default=None)
    g.set_defaults(func=cmd_grassmannian)

    c = sub.add_parser("connectivity", help="line-family connectivity over a local algebra")
    c.add_argument("module")
    c.add_argument("--i", default=None, help="comma separated; all by default")
    c.add_argument("--q", default=None)
    c.set_defaults(func=cmd_connectivity)

    a = sub.add_parser("auslander", help="G_e Hom(D, Y) against G_g(M)")
    a.add_argument("gamma")
    a.add_argument("module")
    a.add_argument("--g", required=True)
    a.add_argument("--q", default=None)
    a.set_defaults(func=cmd_auslander)

    l2 = sub.add_parser("lemma2", help="compare G_(g+c)(N) with G_g(N / ReN)")
    l2.add_argument("algebra")
    l2.add_argument("module")
    l2.add_argument("--idem", required=True, help="comma separated vertices")
    l2.add_argument("--g", required=True, help="comma separated, in vertex order")
    l2.add_argument("--forward-only", action="store_true")
    l2.set_defaults(func=cmd_lemma2)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        report, ok = args.func(args)
        code = EXIT_OK if ok else EXIT_MISMATCH
    except BudgetExceeded as exc:
        report, code = {"error": "budget_exceeded", "detail": str(exc)}, EXIT_BUDGET
    except AssertionError as exc:
        report, code = {"error": "mismatch", "detail": str(exc)}, EXIT_MISMATCH
    except (ValueError, KeyError, OSError) as exc:
        report, code = {"error": "invalid_input", "detail": str(exc)}, EXIT_INPUT
    report = {"command": args.command, "exit_code": code, **report}
    text = json.dumps(report, indent=2, default=str)
    if args.json_out:
        args.json_out.write_text(text + "\n")
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
