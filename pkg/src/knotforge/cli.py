"""Command-line front end.

Machine output is JSON on stdout (or ``--out``); a one-line human summary
goes to stderr.  Exit codes:

    0  verified / conclusive
    1  refuted (or a check failed)
    2  parse or usage error
    3  inconclusive
    4  audit refused (report not verified, or base not certified knotted)
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .diagram import DiagramError, ErrorKind, parse
from .invariants import (
    CapExceeded,
    alexander,
    genus_bracket,
    jones,
    seifert_circles,
)
from .oracle import classify
from .rmoves import SearchBudget
from .trivializer import (
    NotKnotted,
    NotVerified,
    TrivializerReport,
    audit_bound,
    search_trivializers,
    verify_trivializer,
)

EXIT_OK, EXIT_REFUTED, EXIT_PARSE, EXIT_INCONCLUSIVE, EXIT_AUDIT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Everything needed to rerun a command and get the same report."""

    command: str
    inputs: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    output: str | None = None
    seed: int | None = None
    version: str = __version__

    def to_json(self) -> dict:
        return asdict(self)


def _dump(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_diagram(path: str, fmt: str | None):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise DiagramError(ErrorKind.SyntaxError, f"cannot read {path}: {exc}") from exc
    return parse(text, fmt)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DiagramError(ErrorKind.SyntaxError, f"cannot read {path}: {exc}") from exc


def _budget(args) -> SearchBudget:
    return SearchBudget.from_env(
        max_states=getattr(args, "budget", None),
        invariant_cap=getattr(args, "invariant_cap", None),
    )


def _config(args, budget: SearchBudget | None, inputs: dict, seed=None) -> RunConfig:
    return RunConfig(
        command=args.command,
        inputs=inputs,
        budget=budget.to_json() if budget else {},
        output=getattr(args, "out", None),
        seed=seed,
    )


def _crossing_list(text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or not all(parts):
        raise UsageError("--crossings needs a comma-separated list of crossing ids")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad crossing list {text!r}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_invariants(args) -> int:
    d = _read_diagram(args.path, args.format)
    budget = _budget(args)
    out = {"run_config": _config(args, budget, {"path": args.path}).to_json()}
    out["diagram"] = d.to_json_obj()
    out["crossings"] = len(d.crossings)
    out["components"] = d.n_components
    try:
        out["jones"] = jones(d, cap=budget.invariant_cap).to_json()
    except CapExceeded as exc:
        out["jones"] = None
        out["jones_blocked"] = str(exc)
    if d.n_components == 1:
        delta = alexander(d)
        out["alexander"] = delta.to_json()
        out["determinant"] = abs(int(delta(-1)))
        out["genus_bracket"] = genus_bracket(d).to_json()
        out["seifert_circles"] = seifert_circles(d)
    else:
        out["alexander"] = out["determinant"] = out["genus_bracket"] = None
        out["seifert_circles"] = seifert_circles(d)
    _dump(out, args.out)
    _say(f"{len(d.crossings)} crossings, {d.n_components} component(s)")
    return EXIT_OK


def cmd_classify(args) -> int:
    d = _read_diagram(args.path, args.format)
    budget = _budget(args)
    v = classify(d, budget)
    out = {"run_config": _config(args, budget, {"path": args.path}).to_json(), "verdict": v.to_json()}
    _dump(out, args.out)
    _say(v.status)
    return EXIT_INCONCLUSIVE if v.status == "Unknown" else EXIT_OK


def _report_exit(rep: TrivializerReport) -> int:
    return {"Verified": EXIT_OK, "Refuted": EXIT_REFUTED}.get(rep.status, EXIT_INCONCLUSIVE)


def cmd_verify(args) -> int:
    cand = _crossing_list(args.crossings)
    d = _read_diagram(args.path, args.format)
    budget = _budget(args)
    rep = verify_trivializer(d, cand, budget)
    cfg = _config(args, budget, {"path": args.path, "crossings": cand})
    _dump(rep.to_json(cfg.to_json()), args.out)
    _say(json.dumps(rep.overall_json()))
    return _report_exit(rep)


def cmd_search(args) -> int:
    if args.order < 0:
        raise UsageError("--order must be non-negative")
    d = _read_diagram(args.path, args.format)
    budget = _budget(args)
    found = search_trivializers(d, args.order, budget)
    cfg = _config(args, budget, {"path": args.path, "order": args.order})
    out = {
        "run_config": cfg.to_json(),
        "order": args.order,
        "found": [sorted(r.candidate) for r in found],
        "reports": [r.to_json() for r in found],
    }
    _dump(out, args.out)
    _say(f"{len(found)} verified trivializer(s) of order {args.order}")
    return EXIT_OK if found else EXIT_REFUTED


def cmd_gamma(args) -> int:
    from .gamma import gamma

    if args.generation < 0:
        raise UsageError("--generation must be non-negative")
    inst = gamma(args.generation)
    cfg = _config(args, None, {"generation": args.generation})
    out = {"run_config": cfg.to_json(), **inst.to_json(), "marks": list(inst.marks)}
    _dump(out, args.out)
    _say(f"generation {args.generation}: {len(inst.knot.crossings)} crossings, marks {list(inst.marks)}")
    return EXIT_OK


def cmd_brunnian(args) -> int:
    from .gamma import GammaInstance, brunnian_check, gamma

    budget = _budget(args)
    if args.bundle:
        try:
            inst = GammaInstance.from_json(_read_json(args.bundle))
        except (KeyError, TypeError, ValueError) as exc:
            raise DiagramError(ErrorKind.SyntaxError, f"bad bundle: {exc}") from exc
        inputs = {"bundle": args.bundle}
    else:
        if args.generation < 0:
            raise UsageError("--generation must be non-negative")
        inst = gamma(args.generation)
        inputs = {"generation": args.generation}
    rep = brunnian_check(inst, budget)
    out = {"run_config": _config(args, budget, inputs).to_json(), **rep.to_json()}
    _dump(out, args.out)
    _say("passed" if rep.passed else f"failed ({len(rep.unknown)} unknown)")
    if rep.passed:
        return EXIT_OK
    conclusive_bad = any(not e.ok and e.verdict.status != "Unknown" for e in rep.entries)
    return EXIT_REFUTED if conclusive_bad else EXIT_INCONCLUSIVE


def _genus_arg(text: str):
    from .invariants import GenusBracket

    try:
        lo, hi = (int(x) for x in text.split(","))
        return GenusBracket(lo, hi)
    except ValueError:
        raise UsageError(f"--genus expects 'lower,upper', got {text!r}") from None


def cmd_audit(args) -> int:
    try:
        rep = TrivializerReport.from_json(_read_json(args.report))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise DiagramError(ErrorKind.SyntaxError, f"bad report: {exc}") from exc
    base = _read_diagram(args.diagram, args.format) if args.diagram else rep.base
    if args.diagram and base != rep.base:
        raise UsageError("--diagram does not match the report's base diagram")
    budget = _budget(args)
    genus = _genus_arg(args.genus) if args.genus else genus_bracket(base)
    inputs = {"report": args.report, "diagram": args.diagram, "genus": args.genus}
    cfg = _config(args, budget, inputs)
    try:
        res = audit_bound(rep, genus, classify(base, budget))
    except (NotVerified, NotKnotted) as exc:
        _dump({"run_config": cfg.to_json(), "error": type(exc).__name__, "detail": str(exc)}, args.out)
        _say(str(exc))
        return EXIT_AUDIT
    _dump({"run_config": cfg.to_json(), **res.to_json()}, args.out)
    _say(res.status)
    return EXIT_REFUTED if res.status == "Violation" else EXIT_OK


def cmd_selftest(args) -> int:
    from .diagram import parse_pd
    from .gamma import brunnian_check, gamma
    from .laurent import LaurentPoly
    from .rmoves import apply_move, enumerate_moves

    seed = args.seed
    rng = random.Random(seed)
    budget = _budget(args)
    trefoil = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    eight = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)")
    checks = []

    def check(name, fn):
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failed check, reported by name
            ok = False
            name = f"{name}: {type(exc).__name__}: {exc}"
        checks.append({"name": name, "ok": ok})

    # exponents are stored doubled: q^-2 + q^-6 - q^-8
    check("trefoil jones", lambda: jones(trefoil) == LaurentPoly({-4: 1, -12: 1, -16: -1}, "q"))
    check("figure-eight determinant", lambda: abs(alexander(eight)(-1)) == 5)
    check("trefoil order-1 search", lambda: len(search_trivializers(trefoil, 1, budget)) == 3)
    check("trefoil order-2 search", lambda: search_trivializers(trefoil, 2, budget) == [])
    g0 = gamma(0)
    check("gamma 0 verified", lambda: verify_trivializer(g0.knot, g0.marks, budget).status == "Verified")
    check("gamma 0 brunnian", lambda: brunnian_check(g0, budget).passed)

    def fuzz():
        d0 = eight
        d, ref = d0, jones(d0)
        for _ in range(args.moves):
            mv = enumerate_moves(d)
            if not mv:
                break
            d = apply_move(d, rng.choice(mv))
            if len(d.crossings) > 14:
                d = d0
            if jones(d, cap=None) != ref:
                return False
        return True

    check(f"jones under {args.moves} random moves", fuzz)
    cfg = _config(args, budget, {}, seed=seed)
    ok = all(c["ok"] for c in checks)
    _dump({"run_config": cfg.to_json(), "passed": ok, "checks": checks}, args.out)
    _say(f"{sum(c['ok'] for c in checks)}/{len(checks)} checks passed")
    return EXIT_OK if ok else EXIT_REFUTED


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="knotforge", description="Knot diagrams, crossing-change trivializers and the Γ family.")
    p.add_argument("--version", action="version", version=f"knotforge {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, diagram=True):
        if diagram:
            sp.add_argument("path", help="diagram file (PD, Gauss or JSON); '-' reads stdin")
            sp.add_argument("--format", choices=["pd", "gauss", "json"], default=None)
        sp.add_argument("--budget", type=int, default=None, help="max search states")
        sp.add_argument("--invariant-cap", type=int, default=None, dest="invariant_cap")
        sp.add_argument("--out", default=None, help="write JSON here instead of stdout")

    common(sub.add_parser("invariants", help="Jones, Alexander, determinant, genus bracket"))
    common(sub.add_parser("classify", help="Unknot / Unlink / Knotted / Unknown with certificate"))
    sp = sub.add_parser("verify", help="check a strong trivializer candidate")
    common(sp)
    sp.add_argument("--crossings", required=True, help="comma-separated crossing ids")
    sp = sub.add_parser("search", help="find all trivializers of a given order")
    common(sp)
    sp.add_argument("--order", type=int, required=True)
    sp = sub.add_parser("gamma", help="emit a Γ family instance")
    common(sp, diagram=False)
    sp.add_argument("--generation", type=int, required=True)
    sp = sub.add_parser("brunnian-check", help="Brunnian check of a Γ instance")
    common(sp, diagram=False)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--generation", type=int)
    g.add_argument("--bundle", help="bundle written by 'gamma'")
    sp = sub.add_parser("audit", help="compare a verified report against the genus bound")
    common(sp, diagram=False)
    sp.add_argument("--report", required=True)
    sp.add_argument("--diagram", default=None)
    sp.add_argument("--format", choices=["pd", "gauss", "json"], default=None)
    sp.add_argument("--genus", default=None, help="override as 'lower,upper'")
    sp = sub.add_parser("selftest", help="quick end-to-end checks")
    common(sp, diagram=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--moves", type=int, default=200)
    return p


COMMANDS = {
    "invariants": cmd_invariants,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "search": cmd_search,
    "gamma": cmd_gamma,
    "brunnian-check": cmd_brunnian,
    "audit": cmd_audit,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _say(f"usage error: {exc}")
        return EXIT_PARSE
    except DiagramError as exc:
        _say(f"parse error: {exc}")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
