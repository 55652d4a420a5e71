"""Command-line front end: `maxcurve <command> [options]`.

Exit codes: 0 when every check of the command passed, 1 when a check failed
(or a computation was refused), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field

from . import __version__, claims, cover, pencil, search, zeta
from .counting import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    Refusal,
    count_net,
    count_plane,
    genus_from_delta,
    is_smooth_plane,
    singular_points_closure,
    smooth_count,
)
from .gf import FieldError, parse_field_spec
from .registry import Registry, RegistryError, registry_load

log = logging.getLogger("maxcurve")

COMMANDS = ("count", "zeta", "pencil", "autos", "cover", "quotient", "search", "verify-all")


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    p: int
    k: int
    inputs: list[str]
    result: dict
    elapsed_ms: int = 0
    version: str = __version__
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "field": {"p": self.p, "k": self.k},
            "inputs": list(self.inputs),
            "result": self.result,
            "elapsed_ms": self.elapsed_ms,
            "version": self.version,
        }


def report_emit(report: Report, fmt: str = "text") -> bytes:
    d = report.to_dict()
    if fmt == "json":
        return (json.dumps(d, sort_keys=True) + "\n").encode()
    lines = [
        f"command: {d['command']}",
        f"field: {d['field']['p']}^{d['field']['k']}",
        f"inputs: {', '.join(d['inputs'])}",
        f"elapsed_ms: {d['elapsed_ms']}",
        f"version: {d['version']}",
        "result:",
    ]
    lines += [f"  {key}: {json.dumps(val, sort_keys=True)}" for key, val in sorted(d["result"].items())]
    return ("\n".join(lines) + "\n").encode()


def parse_text_result(text: str) -> dict:
    """Inverse of the text rendering of the result block."""
    body = text.split("\nresult:\n", 1)[1]
    out = {}
    for line in body.splitlines():
        key, _, val = line.strip().partition(": ")
        out[key] = json.loads(val)
    return out


# --- argument handling ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="maxcurve", description="Verify the genus-5 curve with 13 points over F_3.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON instead of text")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="evaluation budget before refusing")
        p.add_argument("--registry", default=None, help="model registry file (default: bundled)")

    specs = {
        "count": ("point count of a model over F_{p^k}", ("model", "ext")),
        "zeta": ("L-polynomial from counts N_1..N_k", ("model", "through")),
        "pencil": ("discriminant quintic, smoothness and a transverse line", ("model",)),
        "autos": ("plane automorphisms and the action of linear maps on a net", ("model", "ext")),
        "cover": ("verify the cover and census its fibers up to degree --through", ("model", "through")),
        "quotient": ("the quotient curve: ideal membership, genus and L-polynomial", ("model",)),
        "search": ("exhaustive scan of sextics through the 13 rational points", ("checkpoint", "resume")),
        "verify-all": ("run every reproduction check", ("checkpoint",)),
    }
    defaults = {"count": "C.canonical", "zeta": "C.canonical", "pencil": "C.canonical", "autos": "S.quintic",
                "cover": "cover.map", "quotient": "D.quartic"}
    for name, (help_, opts) in specs.items():
        p = sub.add_parser(name, help=help_)
        common(p)
        if "model" in opts:
            p.add_argument("--model", default=defaults[name])
        if "ext" in opts:
            p.add_argument("--ext", default="3^1", help="field p^k")
        if "through" in opts:
            p.add_argument("--through", type=int, default=None)
        if "checkpoint" in opts:
            p.add_argument("--checkpoint", default=None)
        if "resume" in opts:
            p.add_argument("--resume", action="store_true")
    return ap


def _ext(args, model) -> int:
    try:
        F = parse_field_spec(args.ext)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    if F.p != model.ctx.p:
        raise UsageError(f"--ext {args.ext} has characteristic {F.p}, model {model.id} is over F_{model.ctx.p}")
    if F.k % model.ctx.k:
        raise UsageError(f"--ext {args.ext} does not contain the field of model {model.id}")
    return F.k


def _model(reg: Registry, mid: str, *kinds: str):
    try:
        m = reg.get_model(mid)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    if kinds and m.kind not in kinds:
        raise UsageError(f"model {mid} is a {m.kind}; this command needs {' or '.join(kinds)}")
    return m


def _only(reg: Registry, kind: str):
    found = [m for m in reg.values() if m.kind == kind]
    if len(found) != 1:
        raise UsageError(f"registry must hold exactly one {kind} for this command")
    return found[0]


def _curve_genus(model) -> tuple[int, int]:
    """(genus, delta) of a plane model whose singularities are nodes and cusps."""
    curve = model.plane_curve()
    _, pts = singular_points_closure(curve)
    return genus_from_delta(curve.equation.total_degree(), len(pts)), len(pts)


def _counts(model, ks, args) -> list[int]:
    if model.kind == "quadric-net":
        return [count_net(model.net(), k, budget=args.budget, threads=args.threads).N for k in ks]
    return [smooth_count(model.plane_curve(), k, budget=args.budget)["N_smooth"] for k in ks]


# --- commands -------------------------------------------------------------------------------


def cmd_count(reg, args) -> Report:
    m = _model(reg, args.model, "plane-curve", "weierstrass", "quadric-net")
    k = _ext(args, m)
    if m.kind == "quadric-net":
        rec = count_net(m.net(), k, budget=args.budget, threads=args.threads, model=m.id)
        res = {"N": rec.N, "strategy": rec.strategy}
    else:
        curve = m.plane_curve()
        res = {"N_plane": count_plane(curve, k, args.budget, args.threads).N}
        try:
            sm = smooth_count(curve, k, args.budget)
            res.update(N=sm["N_smooth"], singular_points=sm["singular_points"], delta=sm["delta"])
        except Refusal as exc:
            res.update(N=None, note=str(exc))
    return Report("count", m.ctx.p, k, [m.id], res)


def cmd_zeta(reg, args) -> Report:
    m = _model(reg, args.model, "plane-curve", "weierstrass", "quadric-net")
    if m.kind == "quadric-net":
        g, delta = 5, 0
    else:
        g, delta = _curve_genus(m)
    through = args.through if args.through is not None else g
    if through < g:
        raise UsageError(f"--through must be at least the genus {g}")
    counts = _counts(m, range(1, through + 1), args)
    L = zeta.lpoly_from_counts(counts[:g], m.ctx.q, g)
    predicted = [zeta.counts_from_lpoly(L, k) for k in range(1, through + 1)]
    factors, diag = zeta.weil_factorization(L)
    res = {
        "genus": g,
        "delta": delta,
        "counts": counts,
        "L": L.coeffs.high(),
        "L_str": str(L),
        "factors": [f.to_json() for f in factors],
        "supersingular": {f.factor.to_str(): zeta.is_supersingular(f.factor, m.ctx.q) for f in factors if f.factor.degree() == 2},
    }
    if diag:
        res["diagnostic"] = diag
    checks = {"counts_consistent": predicted == counts}
    res["checks"] = checks
    return Report("zeta", m.ctx.p, m.ctx.k, [m.id], res, checks=checks)


def cmd_pencil(reg, args) -> Report:
    m = _model(reg, args.model, "quadric-net")
    net = m.net()
    S = pencil.discriminant_curve(net)
    cert = is_smooth_plane(S)
    A, B, e = pencil.find_transverse_line(net)
    from .gf import make_field

    rank = pencil.transversal_rank(net, A, B, make_field(m.ctx.p, e))
    checks = {"smooth": cert.smooth, "transversal_rank_5": rank == net.dim}
    inputs = [m.id]
    if "S.quintic" in reg:
        checks["matches_S.quintic"] = bool(S.equation.dehomogenize(2).scale_equal(reg["S.quintic"].equation()))
        inputs.append("S.quintic")
    res = {
        "discriminant": S.equation.to_str(["x", "y", "z"]),
        "smoothness": cert.to_json(),
        "transverse_line": {"A": list(A), "B": list(B), "field": f"{m.ctx.p}^{e}", "rank": rank},
        "checks": checks,
    }
    return Report("pencil", m.ctx.p, m.ctx.k, inputs, res, checks=checks)


def cmd_autos(reg, args) -> Report:
    m = _model(reg, args.model, "plane-curve", "quadric-net")
    k = _ext(args, m)
    inputs = [m.id]
    checks = {}
    res = {}
    if m.kind == "quadric-net":
        net = m.net()
        curve = pencil.discriminant_curve(net)
        maps = [x for x in reg.values() if x.kind == "linear-map" and x.payload.get("acts-on") == m.id]
    else:
        curve = m.plane_curve()
        maps = []
    autos = pencil.brute_force_plane_autos(curve, k, budget=args.budget)
    res["plane_autos"] = [a.to_json() for a in autos]
    for lm in maps:
        M = lm.linear_map()
        ok = pencil.verify_net_automorphism(M, net)
        img = pencil.mu(M, net)
        inputs.append(lm.id)
        res[lm.id] = {"preserves_net": ok, "mu": img.to_json() if img else None}
        checks[f"{lm.id}_preserves_net"] = ok
        checks[f"mu_{lm.id}_is_plane_auto"] = img is not None and img in autos
    for lm in (x for x in reg.values() if x.kind == "linear-map" and x.payload.get("acts-on") == m.id and m.kind == "plane-curve"):
        inputs.append(lm.id)
        checks[f"{lm.id}_is_auto"] = lm.linear_map() in autos
    if checks:
        res["checks"] = checks
    return Report("autos", m.ctx.p, k, inputs, res, checks=checks)


def cmd_cover(reg, args) -> Report:
    m = _model(reg, args.model, "rational-map")
    src = _model(reg, m.payload["source"], "plane-curve")
    tgt = _model(reg, m.payload["target"], "weierstrass", "plane-curve")
    rmap = m.rational_map()
    cert = cover.verify_cover(src.equation(), rmap, tgt.equation())
    k_max = args.through if args.through is not None else 2
    if not 1 <= k_max <= 6:
        raise UsageError("--through must be between 1 and 6 for the census")
    g_src, _ = _curve_genus(src)
    rep = cover.fiber_census(src.plane_curve(), rmap, tgt.plane_curve().equation, k_max=k_max, genus_source=g_src)
    rh = rep.riemann_hurwitz()
    checks = {"cover_verified": cert.holds, "riemann_hurwitz_consistent": rh["consistent"]}
    res = {"certificate": cert.to_json(), "census": rep.to_json(), "checks": checks}
    return Report("cover", m.ctx.p, m.ctx.k, [m.id, src.id, tgt.id], res, checks=checks)


def cmd_quotient(reg, args) -> Report:
    m = _model(reg, args.model, "plane-curve")
    netm = _only(reg, "quadric-net")
    forms = netm.forms()
    from .poly import MultiPoly

    D = m.equation()
    if D.nvars != 3 or not D.is_homogeneous():
        raise UsageError("quotient needs a homogeneous plane model in the first three net variables")
    member = cover.quotient_membership(D.substitute([MultiPoly.var(D.ctx, 5, i) for i in range(3)]), forms)
    g, delta = _curve_genus(m)
    counts = _counts(m, range(1, g + 1), args)
    LD = zeta.lpoly_from_counts(counts, m.ctx.q, g)
    LC = zeta.lpoly_from_counts(_counts(netm, range(1, 6), args), netm.ctx.q, 5)
    checks = {"ideal_member": member, "divides_L_C": zeta.divides(LD.coeffs, LC.coeffs)}
    res = {"delta": delta, "genus": g, "counts": counts, "L": LD.coeffs.high(), "L_C": LC.coeffs.high(), "checks": checks}
    return Report("quotient", m.ctx.p, m.ctx.k, [m.id, netm.id], res, checks=checks)


def cmd_search(reg, args) -> Report:
    cfg = search.SearchConfig(threads=args.threads, checkpoint=args.checkpoint)
    if args.resume and not args.checkpoint:
        raise UsageError("--resume needs --checkpoint")
    basis = search.sextic_space(search.rational_points())
    r = search.run_search(cfg, basis, resume=args.resume)
    res = r.to_json()
    res.pop("config", None)
    shortlist = res.pop("shortlist")
    res["shortlist_head"] = shortlist[:20]
    res["profiles"] = sorted({(c["n9"], c["n27"]) for c in shortlist})
    inputs = []
    checks = {"complete": r.complete}
    if "C.sextic2" in reg:
        digits = search.model_digits(basis, reg["C.sextic2"].plane_curve().equation)
        idx = search.digits_to_index(digits) if digits else None
        res["sextic_index"] = idx
        checks["sextic_in_shortlist"] = any(c.index == idx for c in r.shortlist)
        inputs.append("C.sextic2")
    res["checks"] = checks
    return Report("search", 3, 1, inputs, res, checks=checks)


def cmd_verify_all(reg, args) -> Report:
    opt = claims.Options(threads=args.threads, budget=args.budget, checkpoint=args.checkpoint)
    rows = []
    checks = {}
    for cid, desc, fn in claims.CLAIMS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(reg, opt)
        except (Refusal, BudgetExceeded, ValueError) as exc:
            ok, detail = False, {"error": str(exc)}
        timing = {k: detail.pop(k) for k in list(detail) if k.startswith("seconds")}
        log.info("%s %s (%.1fs) %s", "PASS" if ok else "FAIL", cid, time.perf_counter() - t0, timing or "")
        rows.append({"id": cid, "claim": desc, "passed": bool(ok), "detail": detail})
        checks[cid] = bool(ok)
    res = {"claims": rows, "passed": sum(checks.values()), "total": len(checks)}
    return Report("verify-all", 3, 1, sorted(reg), res, checks=checks)


HANDLERS = {
    "count": cmd_count,
    "zeta": cmd_zeta,
    "pencil": cmd_pencil,
    "autos": cmd_autos,
    "cover": cmd_cover,
    "quotient": cmd_quotient,
    "search": cmd_search,
    "verify-all": cmd_verify_all,
}


def dispatch(argv: list[str]) -> tuple[Report, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    try:
        reg = registry_load(args.registry)
    except RegistryError as exc:
        raise UsageError(str(exc)) from exc
    t0 = time.perf_counter()
    report = HANDLERS[args.command](reg, args)
    report.elapsed_ms = max(0, int((time.perf_counter() - t0) * 1000))
    return report, args


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    argv = sys.argv[1:] if argv is None else argv
    try:
        report, args = dispatch(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (Refusal, BudgetExceeded, search.CheckpointError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    sys.stdout.buffer.write(report_emit(report, "json" if args.json else "text"))
    sys.stdout.flush()
    failed = [name for name, ok in report.checks.items() if not ok]
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0
