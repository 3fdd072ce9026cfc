"""Command-line surface.

Exit codes: 0 success, 2 usage error, 3 verification failure,
4 computational error.
"""

import argparse
import ast
import json
import sys

from .chow import H1, H2, HYPERPLANE, POINT, ChowClass, degree as chow_degree
from .cohom import (
    cohomology_table,
    format_table_text,
    line_cohomology,
    table_to_json,
)
from .config import RunConfig
from .curves import ConicPoint, line_param, conic_param, pencil as make_pencil
from .errors import FlagError, UnverifiedMonad
from .jump import pencil_jump_count, scan_grid
from .monad import (
    LineBundleMonad,
    charge1_family,
    charge2_example,
    decide_stability,
    ensure_verified,
    generate_monad,
    verify_monad,
)
from .restrict import jumping_order, splitting_type
from .ring import QQ, scalar_from_string

CHOW_NAMES = {
    "h1": H1,
    "h2": H2,
    "h": HYPERPLANE,
    "pt": POINT,
}


def chow_eval(expr):
    """Evaluate +, -, *, ** expressions in h1, h2, h, pt and rationals."""
    tree = ast.parse(expr, mode="eval")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.BinOp):
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return _chow_add(left, right)
            if isinstance(node.op, ast.Sub):
                return _chow_add(left, _chow_scale(right, QQ(-1)))
            if isinstance(node.op, ast.Mult):
                return _chow_mul(left, right)
            if isinstance(node.op, ast.Div):
                if isinstance(right, ChowClass):
                    raise ValueError("cannot divide by a Chow class")
                return _chow_scale(left, QQ(1) / right)
            if isinstance(node.op, ast.Pow):
                if isinstance(right, ChowClass) or right != int(right):
                    raise ValueError("exponent must be an integer")
                out = QQ(1)
                for _ in range(int(right)):
                    out = _chow_mul(out, left)
                return out
            raise ValueError("unsupported operator")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return _chow_scale(walk(node.operand), QQ(-1))
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return QQ(node.value)
        if isinstance(node, ast.Name) and node.id in CHOW_NAMES:
            return CHOW_NAMES[node.id]
        raise ValueError("unsupported syntax: %s" % ast.dump(node))

    return walk(tree)


def _promote(v):
    return v if isinstance(v, ChowClass) else ChowClass((v, 0, 0, 0, 0, 0))


def _chow_add(a, b):
    if isinstance(a, ChowClass) or isinstance(b, ChowClass):
        return _promote(a) + _promote(b)
    return a + b


def _chow_mul(a, b):
    if isinstance(a, ChowClass) and isinstance(b, ChowClass):
        return a * b
    if isinstance(a, ChowClass):
        return a * b
    if isinstance(b, ChowClass):
        return b * a
    return a * b


def _chow_scale(a, c):
    return a * c


def _rationals(text):
    return tuple(scalar_from_string(v) for v in text.split(","))


def _load_monad(path):
    with open(path) as fh:
        return LineBundleMonad.from_json(json.load(fh))


def _emit(data, path):
    text = json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser():
    top = argparse.ArgumentParser(prog="flaginst")
    top.add_argument("--seed", type=int, default=0)
    top.add_argument("--jobs", type=int, default=1)
    sub = top.add_subparsers(dest="command", required=True)

    chow = sub.add_parser("chow").add_subparsers(dest="sub", required=True)
    p = chow.add_parser("eval")
    p.add_argument("expr")

    coh = sub.add_parser("coh").add_subparsers(dest="sub", required=True)
    p = coh.add_parser("line")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p = coh.add_parser("table")
    p.add_argument("--charge", type=int, required=True)
    p.add_argument("--which", choices=("first", "second"), default="second")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--json", action="store_true")

    monad = sub.add_parser("monad").add_subparsers(dest="sub", required=True)
    p = monad.add_parser("gen")
    p.add_argument("--charge", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="-")
    p = monad.add_parser("verify")
    p.add_argument("--in", dest="path", required=True)
    p = monad.add_parser("stability")
    p.add_argument("--in", dest="path", required=True)
    p = monad.add_parser("fixture")
    p.add_argument("kind", choices=("charge1", "charge2"))
    p.add_argument("--f", default="0,0,0")
    p.add_argument("--g", default="0,0,0")
    p.add_argument("--gamma", default="1")
    p.add_argument("--delta", default="1")
    p.add_argument("--out", default="-")

    p = sub.add_parser("restrict")
    p.add_argument("--in", dest="path", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--conic", help="p0,p1,p2,L0,L1,L2")
    group.add_argument("--line", help="family,d0,d1,d2")

    jump = sub.add_parser("jump").add_subparsers(dest="sub", required=True)
    p = jump.add_parser("pencil")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--base", required=True, help="p0,p1,p2,L0,L1,L2")
    p.add_argument("--dir", choices=("p", "L"), required=True)
    p.add_argument("--vec", required=True, help="v0,v1,v2")
    p = jump.add_parser("scan")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="-")
    p.add_argument("--summary", default=None)

    return top


def run(args, config):
    if args.command == "chow" and args.sub == "eval":
        print(chow_eval(args.expr))
        return 0
    if args.command == "coh" and args.sub == "line":
        vec = line_cohomology(args.a, args.b)
        print("(%d,%d,%d,%d)" % vec.h)
        return 0
    if args.command == "coh" and args.sub == "table":
        m = _load_monad(args.path)
        if m.charge != args.charge:
            raise FlagError("monad has charge %d, not %d" % (m.charge, args.charge))
        ensure_verified(m, trials=config.trials, prime=config.prime, seed=config.seed)
        table = cohomology_table(m, args.which)
        if args.json:
            _emit(table_to_json(table), None)
        else:
            print(format_table_text(table))
        return 0
    if args.command == "monad" and args.sub == "gen":
        seed = config.seed if args.seed is None else args.seed
        m = generate_monad(
            args.charge, seed, trials=config.trials, prime=config.prime
        )
        _emit(m.to_json(), args.out)
        return 0
    if args.command == "monad" and args.sub == "verify":
        m = _load_monad(args.path)
        report = verify_monad(
            m, trials=config.trials, prime=config.prime, seed=config.seed
        )
        print(report.summary())
        return 0 if report.passed else 3
    if args.command == "monad" and args.sub == "stability":
        m = _load_monad(args.path)
        ensure_verified(m, trials=config.trials, prime=config.prime, seed=config.seed)
        print(decide_stability(m))
        return 0
    if args.command == "monad" and args.sub == "fixture":
        if args.kind == "charge2":
            m = charge2_example()
        else:
            m = charge1_family(
                _rationals(args.f),
                _rationals(args.g),
                scalar_from_string(args.gamma),
                scalar_from_string(args.delta),
            )
        _emit(m.to_json(), args.out)
        return 0
    if args.command == "restrict":
        m = _load_monad(args.path)
        ensure_verified(m, trials=config.trials, prime=config.prime, seed=config.seed)
        if args.conic:
            vals = _rationals(args.conic)
            conic = ConicPoint.make(vals[:3], vals[3:])
            order = jumping_order(m, conic)
            out = {"conic": conic.to_json(), "order": list(order)}
            if conic.is_smooth():
                st = splitting_type(m, conic_param(conic))
                out["splitting"] = list(st.pair)
            _emit(out, None)
        else:
            parts = args.line.split(",")
            family = int(parts[0])
            lam = line_param(family, _rationals(",".join(parts[1:])))
            st = splitting_type(m, lam)
            _emit({"line": args.line, "splitting": list(st.pair)}, None)
        return 0
    if args.command == "jump" and args.sub == "pencil":
        m = _load_monad(args.path)
        ensure_verified(m, trials=config.trials, prime=config.prime, seed=config.seed)
        vals = _rationals(args.base)
        base = ConicPoint.make(vals[:3], vals[3:])
        spec = make_pencil(base, args.dir, _rationals(args.vec))
        result = pencil_jump_count(m, spec)
        print("validated jumping conics: %d" % result.count)
        _emit(
            {
                "count": result.count,
                "rational_roots": [
                    [str(u), mult, list(order), confirmed]
                    for u, mult, order, confirmed in result.rational_roots
                ],
                "bracketed_real": [
                    [str(lo), str(hi), ok] for lo, hi, ok in result.bracketed_real
                ],
                "complex_pairs": result.complex_pairs,
                "degenerate_members": [
                    [str(u), list(order)] for u, order in result.degenerate_members
                ],
                "removed_factors": [[str(u), mult] for u, mult in result.removed],
                "discrepancy": result.discrepancy,
            },
            None,
        )
        return 0
    if args.command == "jump" and args.sub == "scan":
        m = _load_monad(args.path)
        ensure_verified(m, trials=config.trials, prime=config.prime, seed=config.seed)
        seed = config.seed if args.seed is None else args.seed
        report = scan_grid(m, args.n, seed, jobs=config.jobs)
        if args.out in (None, "-"):
            sys.stdout.write(report.to_csv())
        else:
            with open(args.out, "w") as fh:
                fh.write(report.to_csv())
        if args.summary:
            _emit(report.to_json(), args.summary)
        return 0
    raise FlagError("unknown command")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig.from_env(seed=args.seed, jobs=args.jobs)
    try:
        return run(args, config)
    except UnverifiedMonad as exc:
        print("verification failure: %s" % exc, file=sys.stderr)
        return 3
    except FlagError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
