"""Command-line front end.

Exit codes: 0 success, 2 validation failure (including failed theorem
hypotheses and parse errors), 3 theorem conclusion failure, 4 resource cap.
Reports are JSON on stdout; identical inputs give byte-identical output
unless ``--timing`` is passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from .cech import cover_cohomology, element_cohomology, enumerate_covers, make_cover
from .errors import QcechError, SizeCapExceeded, ValidationError
from .presheaf import locally_constant_sheaf, sheaf_check
from .sources import function_ring, ideal_quantale, tau_theta, zmod_ring
from .theorems import (
    TheoremReport,
    idempotent_observation,
    verify_change_of_base,
    verify_cover_iso,
    verify_main_iso,
    verify_quotient_direct_image,
    verify_tau_theta,
)
from .document import Workspace

EXIT_OK, EXIT_INVALID, EXIT_CONCLUSION, EXIT_CAP = 0, 2, 3, 4


def _emit(obj: Any, out) -> None:
    out.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _error_doc(exc: QcechError) -> dict:
    return {"error": exc.kind, "message": str(exc), "witness": exc.witness}


def _report_exit(reports: Sequence[TheoremReport]) -> int:
    if any(r.conclusion == "fail" for r in reports):
        return EXIT_CONCLUSION
    if any(r.conclusion == "skipped" for r in reports):
        return EXIT_INVALID
    return EXIT_OK


# ---------------------------------------------------------------- subcommands


def cmd_validate(args, out) -> int:
    ws = Workspace.from_file(args.file)
    verdicts = []
    ok = True
    for kind, name in ws.objects():
        try:
            obj = ws.get(kind, name)
            verdicts.append({"object": f"{kind}.{name}", "valid": True, "summary": ws.summary(kind, obj)})
        except SizeCapExceeded:
            raise
        except ValidationError as exc:
            ok = False
            verdicts.append({"object": f"{kind}.{name}", "valid": False, **_error_doc(exc)})
    _emit({"file": args.file, "valid": ok, "objects": verdicts}, out)
    return EXIT_OK if ok else EXIT_INVALID


def _resolve_presheaf(ws: Workspace, args):
    F = ws.get("presheaf", args.presheaf)
    if args.quantale is not None and ws.get("quantale", args.quantale) is not F.base:
        raise ValidationError(
            f"presheaf {args.presheaf} does not live on quantale {args.quantale}", witness=[args.presheaf, args.quantale]
        )
    return F


def cmd_cohomology(args, out) -> int:
    ws = Workspace.from_file(args.file)
    F = _resolve_presheaf(ws, args)
    Q = F.base
    u = Q.top if args.element is None else Q.index(args.element)
    t0 = time.perf_counter()
    if args.cover is not None:
        C = make_cover(Q, u, [Q.index(lab) for lab in args.cover])
        res = cover_cohomology(C, F, args.max_q)
        doc = {"mode": "cover"}
    else:
        res = element_cohomology(Q, u, F, args.max_q)
        doc = {"mode": "element"}
    doc.update({"presheaf": args.presheaf, "element": Q.label(u)})
    doc.update(res.as_dict())
    if args.timing:
        doc["seconds"] = round(time.perf_counter() - t0, 6)
    _emit(doc, out)
    return EXIT_OK


def cmd_sheafcheck(args, out) -> int:
    ws = Workspace.from_file(args.file)
    F = ws.get("presheaf", args.presheaf)
    rep = sheaf_check(F)
    doc = {"presheaf": args.presheaf}
    doc.update(rep.as_dict(full=args.full))
    _emit(doc, out)
    return EXIT_OK if rep.is_sheaf else EXIT_INVALID


def _ring_from_shorthand(text: str):
    if text.startswith("zmod"):
        return zmod_ring(int(text[4:]))
    if text.startswith("funring"):
        q, k = text[7:].split(",") if "," in text else text[7:].split("^")
        return function_ring(int(q), int(k))
    raise ValidationError(f"unknown ring shorthand {text!r}; use zmodN or funringQ,K", witness=text)


def cmd_verify(args, out) -> int:
    th = args.theorem
    reports: list[TheoremReport] = []
    extra: dict[str, Any] = {}
    if th == "tau-theta":
        reports.append(verify_tau_theta(args.q, args.k))
    elif th == "quotient":
        R = _ring_from_shorthand(args.ring)
        Q, ideals = ideal_quantale(R)
        targets = ideals if args.ideal is None else [ideals[Q.index(args.ideal)]]
        reports += [verify_quotient_direct_image(R, I) for I in targets]
    elif th == "cover-iso":
        tt = tau_theta(function_ring(args.q, args.k))
        F = locally_constant_sheaf(tt.space, _coeff(args))
        Q = tt.ideals
        if args.cover:
            covers = [make_cover(Q, Q.top, [Q.index(lab) for lab in args.cover])]
        else:
            covers = enumerate_covers(Q, Q.top)
        reports += [verify_cover_iso(C, F, tt.tau) for C in covers]
    elif th == "idempotents":
        extra["observation"] = idempotent_observation(_ring_from_shorthand(args.ring))
    else:
        ws = Workspace.from_file(args.file)
        f = ws.get("morphism", args.morphism)
        F = ws.get("presheaf", args.presheaf)
        if th == "main-iso":
            reports.append(verify_main_iso(f, F, args.max_q, instance=f"{args.morphism} with {args.presheaf}"))
        else:
            reports.append(verify_change_of_base(F, f, instance=f"{args.morphism} with {args.presheaf}"))
    doc: dict[str, Any] = {"theorem": th, "reports": [r.as_dict() for r in reports]}
    doc.update(extra)
    doc["conclusion"] = {0: "pass", 2: "hypothesis failed", 3: "fail"}[_report_exit(reports)]
    _emit(doc, out)
    return _report_exit(reports)


def _coeff(args):
    from .abgroups import FgAbGroup

    return FgAbGroup(tuple(int(x) for x in (args.coefficients or "0").split(",")))


def _sweep_one(job: tuple[str, int]) -> dict:
    from .corpus import base_pairs, morphism_instances
    from .theorems import verify_change_of_base, verify_main_iso

    kind, i = job
    if kind == "sheaf":
        bp = base_pairs()[i]
        rep = sheaf_check(bp.sheaf)
        return {"kind": "sheaf", "instance": bp.name, "is_sheaf": rep.is_sheaf, "covers": len(rep.verdicts)}
    m = morphism_instances()[i]
    try:
        r = verify_main_iso(m.f, m.sheaf, instance=m.name) if kind == "main-iso" else verify_change_of_base(
            m.sheaf, m.f, instance=m.name
        )
    except QcechError as exc:
        return {"kind": kind, "instance": m.name, "conclusion": "error", **_error_doc(exc)}
    return {"kind": kind, "instance": m.name, "conclusion": r.conclusion, "data": r.data}


def cmd_sweep(args, out) -> int:
    from .corpus import base_pairs, morphism_instances

    kinds = ["sheaf", "main-iso", "change-of-base"] if args.theorem == "all" else [args.theorem]
    jobs = []
    for kind in kinds:
        n = len(base_pairs()) if kind == "sheaf" else len(morphism_instances())
        jobs += [(kind, i) for i in range(n)]
    t0 = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_sweep_one, jobs, chunksize=4))
    else:
        results = [_sweep_one(j) for j in jobs]
    summary: dict[str, Any] = {}
    for kind in kinds:
        rs = [r for r in results if r["kind"] == kind]
        if kind == "sheaf":
            summary[kind] = {"instances": len(rs), "sheaves": sum(r["is_sheaf"] for r in rs)}
        else:
            summary[kind] = {
                c: sum(r["conclusion"] == c for r in rs) for c in ("pass", "fail", "skipped", "error")
            }
    doc: dict[str, Any] = {"summary": summary, "results": results}
    if args.timing:
        doc["seconds"] = round(time.perf_counter() - t0, 6)
    _emit(doc, out)
    failed = any(r.get("conclusion") == "fail" for r in results) or any(
        r["kind"] == "sheaf" and not r["is_sheaf"] for r in results
    )
    return EXIT_CONCLUSION if failed else EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcech", description="Cech cohomology of finite quantales")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate every object of a document")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("cohomology", help="cohomology of an element or of one cover")
    c.add_argument("file")
    c.add_argument("--presheaf", required=True)
    c.add_argument("--quantale")
    c.add_argument("--element", help="element label (default: top)")
    c.add_argument("--cover", nargs="+", metavar="LABEL", help="compute this cover only")
    c.add_argument("--max-q", type=int, dest="max_q")
    c.add_argument("--timing", action="store_true")
    c.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("sheafcheck", help="check the sheaf condition on every cover")
    s.add_argument("file")
    s.add_argument("--presheaf", required=True)
    s.add_argument("--full", action="store_true", help="list every cover verdict")
    s.set_defaults(func=cmd_sheafcheck)

    vf = sub.add_parser("verify", help="check a theorem on an instance")
    vsub = vf.add_subparsers(dest="theorem", required=True)
    tt = vsub.add_parser("tau-theta")
    tt.add_argument("q", type=int)
    tt.add_argument("k", type=int)
    qt = vsub.add_parser("quotient")
    qt.add_argument("ring", help="zmodN or funringQ,K")
    qt.add_argument("--ideal", help="ideal label; default: every ideal")
    ci = vsub.add_parser("cover-iso")
    ci.add_argument("q", type=int)
    ci.add_argument("k", type=int)
    ci.add_argument("--cover", nargs="+", metavar="LABEL", help="ideal labels; default: every cover of R")
    ci.add_argument("--coefficients", help="comma-separated factors, 0 for Z (default 0)")
    idm = vsub.add_parser("idempotents")
    idm.add_argument("ring")
    for name in ("main-iso", "change-of-base"):
        m = vsub.add_parser(name)
        m.add_argument("file")
        m.add_argument("--morphism", required=True)
        m.add_argument("--presheaf", required=True)
        if name == "main-iso":
            m.add_argument("--max-q", type=int, dest="max_q")
    vf.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="run the built-in corpus")
    sw.add_argument("--theorem", choices=["all", "sheaf", "main-iso", "change-of-base"], default="all")
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--timing", action="store_true")
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except SizeCapExceeded as exc:
        _emit(_error_doc(exc), out)
        return EXIT_CAP
    except QcechError as exc:
        _emit(_error_doc(exc), out)
        return EXIT_INVALID
    except KeyError as exc:
        _emit({"error": "UnknownName", "message": str(exc.args[0]) if exc.args else "unknown name", "witness": None}, out)
        return EXIT_INVALID
    except OSError as exc:
        _emit({"error": "IOError", "message": str(exc), "witness": None}, out)
        return EXIT_INVALID


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
