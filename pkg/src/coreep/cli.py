"""``coreep`` command-line interface.

Exit codes: 0 success (or relation holds), 1 relation fails or an
audit found a violated equation, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, decomp, inverses, orders
from .errors import CoreEPError, IndexTooLarge
from .gen import GenSpec, matrix_with_structure, order_pair
from .matfile import emit_matrix, format_entry, read_matrix, write_matrix
from .numkernel import ToleranceContext, rank

SCHEMA = 1

INVERSES = {
    "mp": lambda a, tol: inverses.moore_penrose(a, tol),
    "drazin": lambda a, tol: inverses.drazin(a, tol),
    "group": lambda a, tol: inverses.group(a, tol),
    "core": lambda a, tol: inverses.core(a, tol),
    "coreep": lambda a, tol: inverses.core_ep(a, tol),
}

ORDER_NAMES = {
    "minus": orders.Relation.MINUS,
    "sharp": orders.Relation.SHARP,
    "core": orders.Relation.CORE,
    "drazin": orders.Relation.DRAZIN,
    "coreep": orders.Relation.CORE_EP,
    "cn": orders.Relation.CN,
    "coreminus": orders.Relation.CORE_MINUS,
}

DECOMPS = ("coreep", "cn", "canonical", "coreform")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def matrix_payload(a) -> dict:
    a = np.asarray(a)
    return {
        "shape": list(a.shape),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def _clean(value):
    """Make residual maps JSON-friendly (numpy scalars, inf)."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if np.isfinite(v) else str(v)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


# -- commands --------------------------------------------------------------


def cmd_info(args, tol):
    a = read_matrix(args.matrix)
    out = {"n": a.shape[0], "m": a.shape[1], "rank": rank(a, tol)}
    if a.shape[0] == a.shape[1]:
        k, q = decomp.index_and_core_basis(a, tol)
        out.update(index=k, core_rank=q.shape[1])
    return out, 0


def _inverse_payload(res):
    return {
        "route": res.route,
        "index": res.index,
        "core_rank": res.core_rank,
        "residuals": res.residuals,
        "diagnostics": res.diagnostics,
        "value": res.value,
    }


def cmd_inv(args, tol):
    a = read_matrix(args.matrix)
    res = INVERSES[args.kind](a, tol)
    return {"kind": args.kind, **_inverse_payload(res)}, 0


def cmd_decomp(args, tol):
    a = read_matrix(args.matrix)
    out = {"kind": args.kind}
    if args.kind == "coreep":
        parts = decomp.core_ep_decompose(a, tol)
        out.update(index=parts.index, a1=parts.a1, a2=parts.a2)
        out["residuals"] = decomp.core_ep_law_residuals(a, parts, tol)
    elif args.kind == "cn":
        parts = decomp.core_nilpotent_decompose(a, tol)
        out.update(index=parts.index, core=parts.core, nil=parts.nil)
    else:
        cf = decomp.canonical_form(a, tol) if args.kind == "canonical" else decomp.core_form(a, tol)
        out.update(index=cf.index, core_rank=cf.core_rank, u=cf.u, t=cf.t, s=cf.s)
        if args.kind == "canonical":
            out["nil"] = cf.nil
            out["residuals"] = decomp.canonical_residuals(a, cf)
    return out, 0


def cmd_order(args, tol):
    a = read_matrix(args.a)
    b = read_matrix(args.b)
    verdict = orders.compare(ORDER_NAMES[args.relation], a, b, tol)
    out = {"relation": args.relation, "holds": verdict.holds, "residuals": verdict.residuals}
    if verdict.rank_witness is not None:
        out["rank_witness"] = list(verdict.rank_witness)
    return out, 0 if verdict.holds else 1


def cmd_verify(args, tol):
    a = read_matrix(args.matrix)
    audit = {}
    failed = False
    for kind, fn in INVERSES.items():
        try:
            res = fn(a, tol)
        except IndexTooLarge as exc:
            audit[kind] = {"status": "not-applicable", "reason": str(exc)}
            continue
        except CoreEPError as exc:
            failed = True
            audit[kind] = {
                "status": "failed",
                "reason": f"{type(exc).__name__}: {exc}",
                "residuals": getattr(exc, "residuals", {}) or {},
            }
            continue
        audit[kind] = {"status": "ok", "route": res.route, "residuals": res.residuals}
    parts = decomp.core_ep_decompose(a, tol)
    laws = decomp.core_ep_law_residuals(a, parts, tol)
    audit["coreep_decomposition"] = {"status": "ok", "residuals": laws}
    return {"index": parts.index, "audit": audit}, 1 if failed else 0


def cmd_gen(args, tol):
    spec = GenSpec(
        n=args.n,
        core_rank=args.rank,
        nilpotency_index=args.index,
        seed=args.seed,
        conditioning=args.conditioning,
    )
    if args.relation is None:
        a, _ = matrix_with_structure(spec.validate())
        mats = {"A": a}
    else:
        a, b = order_pair(spec, ORDER_NAMES[args.relation], positive=not args.negative)
        mats = {"A": a, "B": b}
    out = {
        "spec": {
            "n": spec.n,
            "rank": spec.core_rank,
            "index": spec.nilpotency_index,
            "seed": spec.seed,
            "conditioning": spec.conditioning,
        },
        "relation": args.relation,
        "negative": bool(args.negative),
    }
    if args.output:
        written = []
        for name, m in mats.items():
            path = Path(args.output)
            if len(mats) > 1:
                path = path.with_name(f"{path.stem}_{name}{path.suffix or '.mat'}")
            write_matrix(path, m, comment=f"coreep gen {name}")
            written.append(str(path))
        out["files"] = written
    else:
        out.update(mats)
    return out, 0


# -- rendering -------------------------------------------------------------


def _to_json(obj):
    if isinstance(obj, np.ndarray):
        return matrix_payload(obj)
    if isinstance(obj, dict):
        return {str(k): _to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_json(v) for v in obj]
    return _clean(obj)


def _fmt_scalar(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.3e}"
    return str(v)


def _render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, np.ndarray):
            lines.append(f"{pad}{key}:")
            for row in val:
                lines.append(pad + "  " + " ".join(format_entry(z) for z in row))
        elif isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(val, indent + 1))
        elif isinstance(val, (list, tuple)):
            lines.append(f"{pad}{key}: {' '.join(_fmt_scalar(v) for v in val)}")
        else:
            lines.append(f"{pad}{key}: {_fmt_scalar(val)}")
    return lines


def render(payload, fmt, stream):
    if fmt == "json":
        json.dump(_to_json({"schema": SCHEMA, **payload}), stream, indent=2, sort_keys=True)
        stream.write("\n")
    elif payload.get("command") == "gen" and "files" not in payload:
        for name in ("A", "B"):
            if name in payload:
                stream.write(f"# {name}\n" if "B" in payload else "")
                stream.write(emit_matrix(payload[name]))
    else:
        body = {k: v for k, v in payload.items() if k != "command"}
        stream.write("\n".join(_render_text(body)) + "\n")


# -- argument parsing --------------------------------------------------------


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="relative tolerance (default 1e-10)")
    p.add_argument("--atol", type=float, default=argparse.SUPPRESS, help="absolute tolerance (default 0)")
    p.add_argument(
        "--format", choices=("text", "json"), default=argparse.SUPPRESS, help="output format (default text)"
    )
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="coreep", description="Generalized inverses and matrix orders.", parents=[common])
    parser.add_argument("--version", action="version", version=f"coreep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", parents=[common], help="size, rank, index and core rank")
    p.add_argument("matrix")

    p = sub.add_parser("inv", parents=[common], help="compute a generalized inverse")
    p.add_argument("kind", choices=tuple(INVERSES))
    p.add_argument("matrix")

    p = sub.add_parser("decomp", parents=[common], help="decompositions and block forms")
    p.add_argument("kind", choices=DECOMPS)
    p.add_argument("matrix")

    p = sub.add_parser("order", parents=[common], help="decide A <= B (exit 0 holds, 1 fails)")
    p.add_argument("relation", choices=tuple(ORDER_NAMES))
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("verify", parents=[common], help="residual audit of every inverse")
    p.add_argument("matrix")

    p = sub.add_parser("gen", parents=[common], help="emit structured random matrices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True, help="core rank r = rk(A^k)")
    p.add_argument("--index", type=int, required=True, help="nilpotency index k of the nilpotent block")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--conditioning", type=float, default=1e3)
    p.add_argument("--relation", choices=tuple(ORDER_NAMES), default=None)
    p.add_argument("--negative", action="store_true", help="emit a pair that violates the relation")
    p.add_argument("-o", "--output", help="output file (pairs get _A/_B suffixes)")
    return parser


COMMANDS = {
    "info": cmd_info,
    "inv": cmd_inv,
    "decomp": cmd_decomp,
    "order": cmd_order,
    "verify": cmd_verify,
    "gen": cmd_gen,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"coreep: usage error: {exc}\n")
        return 2
    fmt = getattr(args, "format", "text")
    try:
        tol = ToleranceContext(atol=getattr(args, "atol", 0.0), rtol=getattr(args, "tol", 1e-10))
        payload, code = COMMANDS[args.command](args, tol)
    except (CoreEPError, ValueError, OSError) as exc:
        name = type(exc).__name__
        msg = str(exc)
        stderr.write(f"coreep: error: {msg if msg.startswith(name) else f'{name}: {msg}'}\n")
        if fmt == "json":
            render({"command": args.command, "error": {"type": name, "message": str(exc)}}, fmt, stdout)
        return 2
    render({"command": args.command, **payload}, fmt, stdout)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
