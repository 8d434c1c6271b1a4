"""Command-line front end.  Exit codes: 0 ok/true, 1 false, 2 usage error, 3 cap exceeded."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import export, kernel, tree
from .britton import GroupParams, britton_reduce, normal_form, words_equal
from .endo import (
    PHI_PRIME,
    Check,
    EndoSpec,
    Report,
    check_corollary_identities,
    homomorphism_probe,
    in_kernel,
    kernel_witness,
    limit_commutator_order,
    same_kernel_probe,
    tietze_relator_check,
)
from .words import WordSyntaxError, parse_word

OK, FALSE, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _word(text: str):
    try:
        return parse_word(text)
    except WordSyntaxError as err:
        raise UsageError(f"cannot parse {text!r}: {err}") from None


class Context:
    def __init__(self, args):
        self.args = args
        self.fmt = args.format
        self.params = GroupParams(args.n, args.m)
        self.sibling_cap = _env_int("BS23_SIBLING_CAP", 10_000)
        self.cayley_cap = _env_int("BS23_CAYLEY_RADIUS_CAP", export.CAYLEY_RADIUS_CAP)
        self.tree_cap = _env_int("BS23_TREE_RADIUS_CAP", export.TREE_RADIUS_CAP)
        self.out: list[str] = []

    def emit(self, text: str):
        self.out.append(text)

    def json(self) -> bool:
        return self.fmt == "json"


def _require_bs23(ctx: Context):
    if (ctx.params.n, ctx.params.m) != (2, 3):
        raise UsageError(f"this command is only available for BS(2,3), not {ctx.params}")


# -- per-word commands ------------------------------------------------------------


def do_reduce(ctx: Context, text: str) -> int:
    u = _word(text)
    wit = britton_reduce(u, ctx.params)
    if ctx.json():
        ctx.emit(_dump({"input": str(u), "reduced": str(wit.reduced), "trivial": wit.trivial,
                        "trace": [p.to_json() for p in wit.trace]}))
    else:
        ctx.emit(str(wit.reduced))
    return OK


def do_nf(ctx: Context, text: str) -> int:
    nf = normal_form(_word(text), ctx.params)
    ctx.emit(_dump({"word": str(nf), **nf.to_json()}) if ctx.json() else str(nf))
    return OK


def do_trivial(ctx: Context, text: str) -> int:
    wit = britton_reduce(_word(text), ctx.params, record=False)
    if ctx.json():
        ctx.emit(_dump({"trivial": wit.trivial, "reduced": str(wit.reduced)}))
    else:
        ctx.emit("Trivial" if wit.trivial else f"NonTrivial {wit.reduced}")
    return OK if wit.trivial else FALSE


def do_kernel(ctx: Context, text: str) -> int:
    _require_bs23(ctx)
    u = _word(text)
    e = PHI_PRIME if ctx.args.prime else EndoSpec(2, ctx.args.power)
    if e == PHI_PRIME and ctx.args.power != 1:
        e = EndoSpec(3, ctx.args.power)
    inside = in_kernel(u, e)
    if ctx.json():
        ctx.emit(_dump({"in_kernel": inside, "image": str(kernel_witness(u, e))}))
    else:
        ctx.emit("in kernel" if inside else f"not in kernel (image {kernel_witness(u, e)})")
    return OK if inside else FALSE


def do_decompose(ctx: Context, text: str) -> int:
    _require_bs23(ctx)
    try:
        d = kernel.decompose(_word(text), ctx.sibling_cap)
    except kernel.NonKernel as err:
        print(f"error: {err}", file=sys.stderr)
        return FALSE
    except kernel.DecompositionCapExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        partial = {"factors": [f.to_json() for f in err.partial], "certified": False, "partial": True}
        ctx.emit(_dump(partial) if ctx.json() else " ".join(str(f) for f in err.partial))
        return CAP
    if ctx.json():
        ctx.emit(_dump(d.to_json()))
    else:
        ctx.emit("\n".join(str(f) for f in d.factors) or "(empty product)")
        ctx.emit(f"certified: {str(d.certificate).lower()}")
    return OK if d.certificate else FALSE


def do_classify(ctx: Context, text: str) -> int:
    _require_bs23(ctx)
    u = _word(text)
    v = tree.TreeVertex.of(u)
    cls = tree.classify_path(v)
    data = {"path": str(v), "good_representative": str(v.representative()), "height": v.height, **cls.to_json()}
    if ctx.json():
        ctx.emit(_dump(data))
    else:
        kind = "swiss" if cls.swiss else "nepalese"
        end = "end-essential" if cls.end_essential else "ends in a tip"
        ctx.emit(f"{v}: {kind}, {end}, tips {list(cls.tips)}, valleys {list(cls.valleys)}")
    return OK


def do_siblings(ctx: Context, text: str) -> int:
    _require_bs23(ctx)
    try:
        comp = tree.sibling_component(_word(text), ctx.sibling_cap, flips=ctx.args.flips)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return FALSE
    if ctx.json():
        ctx.emit(_dump(comp.to_json()))
    else:
        ctx.emit("\n".join(str(v.representative()) for v in comp.members))
        if comp.canonical is not None:
            ctx.emit(f"canonical: {comp.canonical_word}")
    if comp.truncated:
        print(f"error: sibling component exceeds the cap {ctx.sibling_cap}", file=sys.stderr)
        return CAP
    return OK


WORD_COMMANDS = {
    "reduce": do_reduce,
    "nf": do_nf,
    "trivial": do_trivial,
    "kernel": do_kernel,
    "decompose": do_decompose,
    "classify": do_classify,
    "siblings": do_siblings,
}


def do_equal(ctx: Context) -> int:
    u, v = _word(ctx.args.u), _word(ctx.args.v)
    same = words_equal(u, v, ctx.params)
    ctx.emit(_dump({"equal": same}) if ctx.json() else str(same).lower())
    return OK if same else FALSE


def do_basis(ctx: Context) -> int:
    _require_bs23(ctx)
    if ctx.args.depth < 0:
        raise UsageError("depth must be non-negative")
    elems = kernel.basis_elements(ctx.args.depth, ctx.sibling_cap)
    if ctx.json():
        ctx.emit(_dump({"depth": ctx.args.depth, "elements": [e.to_json() for e in elems]}))
    else:
        ctx.emit("\n".join(str(e) for e in elems))
    return OK


def _report(ctx: Context, report) -> int:
    if ctx.json():
        ctx.emit(_dump(report.to_json()))
    else:
        for c in report.to_json()["checks"]:
            line = f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}"
            if "witness" in c:
                line += f" (witness: {c['witness']})"
            ctx.emit(line)
    return OK if report.passed else FALSE


def do_probe(ctx: Context) -> int:
    _require_bs23(ctx)
    a = ctx.args
    seed = a.seed if a.seed is not None else 0
    if a.kind == "freeness":
        trials = a.trials if a.trials is not None else 1000
        return _report(ctx, kernel.freeness_probe(trials, a.max_factors, a.conj_bound, seed))
    if a.kind == "samekernel":
        trials = a.trials if a.trials is not None else 500
        return _report(ctx, same_kernel_probe(trials, a.max_len, seed, kernel_samples=a.kernel_samples))
    trials = a.trials if a.trials is not None else 200
    return _report(ctx, homomorphism_probe(trials, a.max_len, seed))


def do_export(ctx: Context) -> int:
    _require_bs23(ctx)
    kind, r = ctx.args.kind, ctx.args.radius
    if r < 0:
        raise UsageError("radius must be non-negative")
    try:
        if kind == "cayley":
            doc = export.cayley_ball(r, ctx.cayley_cap)
        elif kind == "tree":
            doc = export.tree_ball(r, ctx.tree_cap)
        elif kind == "forest":
            doc = export.height_forest_doc(r, cap=ctx.tree_cap)
        else:
            doc = export.quotient_ball(r, ctx.cayley_cap)
    except export.RadiusCapExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return CAP
    if ctx.fmt == "json":
        ctx.emit(export.emit_json(doc).rstrip("\n"))
    elif ctx.fmt == "csv":
        ctx.emit(export.emit_csv(doc).rstrip("\n"))
    else:
        ctx.emit(export.emit_dot(doc).rstrip("\n"))
    return OK


def do_check(ctx: Context) -> int:
    _require_bs23(ctx)
    a = ctx.args
    if a.kind == "corollary":
        return _report(ctx, check_corollary_identities())
    if a.kind == "tietze":
        if a.lam is not None or a.mu is not None:
            lam, mu = _word(a.lam or "a^2"), _word(a.mu or "b")
            ok = tietze_relator_check(lam, mu)
            return _report(ctx, Report([Check(f"relator holds for ({lam}, {mu})", ok)]))
        checks = []
        for lam, mu, expected in (("a^2", "b", True), ("a^3", "b", True), ("a", "b", False)):
            got = tietze_relator_check(_word(lam), _word(mu))
            checks.append(Check(f"({lam}, {mu}) satisfies the relator: {str(got).lower()}", got == expected))
        return _report(ctx, Report(checks))
    rows = []
    for m in range(1, a.max_k + 1):
        for k in range(m + 1, a.max_k + 1):
            rows.append((m, k, limit_commutator_order(m, k, a.cap)))
    if ctx.json():
        ctx.emit(_dump({"orders": [{"m": m, "k": k, "N": n} for m, k, n in rows]}))
    else:
        for m, k, n in rows:
            ctx.emit(f"m={m} k={k} N={n if n is not None else 'none'}")
    return OK if all(n is not None for *_, n in rows) else FALSE


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "dot", "csv"], default="text")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--n", type=int, default=2, help="exponent n in BS(n,m)")
    common.add_argument("--m", type=int, default=3, help="exponent m in BS(n,m)")

    p = argparse.ArgumentParser(prog="bs23", description="Word problem, kernel basis and graphs for BS(2,3).")
    sub = p.add_subparsers(dest="command", required=True)

    for name in WORD_COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("word", nargs="?")
        sp.add_argument("--file", help="read one word per line")
        if name == "kernel":
            sp.add_argument("--power", type=int, default=1)
            sp.add_argument("--prime", action="store_true", help="use a -> a^3 instead of a -> a^2")
        if name == "siblings":
            sp.add_argument("--flips", action="store_true",
                            help="also flip the residue before a final b^-1 b^-1 (the basis grouping)")

    sp = sub.add_parser("equal", parents=[common])
    sp.add_argument("u")
    sp.add_argument("v")

    sp = sub.add_parser("basis", parents=[common])
    sp.add_argument("--depth", type=int, required=True)

    sp = sub.add_parser("probe", parents=[common])
    sp.add_argument("kind", choices=["freeness", "samekernel", "homomorphism"])
    sp.add_argument("--trials", type=int)
    sp.add_argument("--max-factors", type=int, default=6)
    sp.add_argument("--conj-bound", type=int, default=4)
    sp.add_argument("--max-len", type=int, default=10)
    sp.add_argument("--kernel-samples", type=int, default=100)

    sp = sub.add_parser("export", parents=[common])
    sp.add_argument("kind", choices=["cayley", "tree", "forest", "quotient"])
    sp.add_argument("--radius", type=int, required=True)

    sp = sub.add_parser("check", parents=[common])
    sp.add_argument("kind", choices=["corollary", "tietze", "limit"])
    sp.add_argument("--lam")
    sp.add_argument("--mu")
    sp.add_argument("--max-k", type=int, default=3)
    sp.add_argument("--cap", type=int, default=6)
    return p


def run(argv=None) -> tuple[int, str]:
    """Run one invocation; returns the exit code and the standard-output text."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (USAGE if exc.code else OK), ""
    try:
        ctx = Context(args)
        cmd = args.command
        if cmd in WORD_COMMANDS:
            if (args.word is None) == (args.file is None):
                raise UsageError(f"{cmd} needs exactly one of a word argument or --file")
            if args.file is not None:
                try:
                    with open(args.file, encoding="utf-8") as fh:
                        words = [line.strip() for line in fh if line.strip()]
                except OSError as err:
                    raise UsageError(str(err)) from None
            else:
                words = [args.word]
            code = max((WORD_COMMANDS[cmd](ctx, w) for w in words), default=OK)
        else:
            code = {"equal": do_equal, "basis": do_basis, "probe": do_probe,
                    "export": do_export, "check": do_check}[cmd](ctx)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE, ""
    except ValueError as err:
        # e.g. invalid group parameters
        print(f"error: {err}", file=sys.stderr)
        return USAGE, ""
    return code, "\n".join(ctx.out) + ("\n" if ctx.out else "")


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
