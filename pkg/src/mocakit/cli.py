"""Command-line interface: ``mocakit <subcommand> ...``.

Exit status is 0 on success, 2 when the input fails validation (bad rule
spec, non-bipermutive rule, non-orthogonal pair, ...) and 1 on I/O errors.
"""

from __future__ import annotations

import argparse
import errno
import json
import os
import re
import sys

import numpy as np

from mocakit import __version__
from mocakit.boolfun import (
    bent_from_family, ci_function_from_family, ci_order, is_bent, nonlinearity, walsh_transform,
)
from mocakit.ca import LocalRule, RuleError
from mocakit.designs import (
    are_orthogonal, binary_expand, cayley_table, format_rows, format_square, mols_to_oa, oa_strength,
)
from mocakit.gf import field
from mocakit.linear_moca import (
    MocaFamily, count_coprime_pairs, enumerate_coprime_pairs, family_to_mols, is_extendable,
    max_family,
)
from mocakit.nonlinear_moca import search_orthogonal
from mocakit.prng import (
    OcaPrng, cycle_report, max_period_report, stream_hex, verify_cycle_report,
)
from mocakit.sss import (
    Share, ShareError, audit_is_uniform, deal, reconstruct, secrecy_audit, validate_family,
)

_RULE_RE = re.compile(r"^(?:wolfram:(\d+):d(\d+)|linear:q(\d+):([\d,]+))$")


class UsageError(ValueError):
    pass


def parse_rule_arg(text: str) -> LocalRule:
    """``wolfram:150:d3`` or ``linear:q2:1,0,1``."""
    m = _RULE_RE.match(text.strip())
    if not m:
        raise UsageError(f"malformed rule spec {text!r}; use wolfram:CODE:dD or linear:qQ:a1,...,ad")
    if m.group(1) is not None:
        return LocalRule.wolfram(int(m.group(1)), int(m.group(2)))
    q = int(m.group(3))
    field(q)
    coeffs = [int(c) for c in m.group(4).split(",") if c != ""]
    return LocalRule.linear(coeffs, q)


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def load_family(arg: str):
    """A family JSON file (polynomials or rules) or ``spec/spec/...``."""
    if os.path.exists(arg):
        data = _read_json(arg)
        if isinstance(data, dict) and "polynomials" in data:
            return MocaFamily.from_json(data)
        rules = data["rules"] if isinstance(data, dict) else data
        return [LocalRule.from_json(r) for r in rules]
    if arg.endswith(".json"):
        raise FileNotFoundError(errno.ENOENT, "no such file", arg)
    return [parse_rule_arg(s) for s in arg.split("/")]


def load_pair(arg: str) -> tuple[LocalRule, LocalRule]:
    if os.path.exists(arg):
        data = _read_json(arg)
        return LocalRule.from_json(data["f"]), LocalRule.from_json(data["g"])
    if arg.endswith(".json"):
        raise FileNotFoundError(errno.ENOENT, "no such file", arg)
    parts = arg.split("/")
    if len(parts) != 2:
        raise UsageError("a pair is a JSON file or two rule specs joined by '/'")
    return parse_rule_arg(parts[0]), parse_rule_arg(parts[1])


def _default_threads() -> int:
    env = os.environ.get("MOCA_KIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"MOCA_KIT_THREADS must be an integer, got {env!r}")
    return 1


def _emit(args, payload, text: str | None = None) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if args.json or text is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_latin(args) -> int:
    rule = parse_rule_arg(args.rule)
    sq = cayley_table(rule)
    _emit(args, {"rule": str(rule), "order": int(sq.shape[0]), "square": (sq + 1).tolist()},
          format_square(sq))
    return 0


def cmd_orthogonal(args) -> int:
    f, g = load_pair(args.pair)
    ok = are_orthogonal(cayley_table(f), cayley_table(g))
    _emit(args, {"f": str(f), "g": str(g), "orthogonal": bool(ok)},
          "orthogonal" if ok else "not orthogonal")
    return 0


def cmd_enumerate_linear(args) -> int:
    pairs = enumerate_coprime_pairs(args.q, args.n)
    formula = count_coprime_pairs(args.q, args.n)
    if args.count_only:
        _emit(args, {"q": args.q, "n": args.n, "count": len(pairs), "formula": formula},
              str(len(pairs)))
        return 0
    payload = {"q": args.q, "n": args.n, "count": len(pairs), "formula": formula,
               "pairs": [[a.to_json(), b.to_json()] for a, b in pairs]}
    text = "\n".join(f"{json.dumps(a.to_json())} {json.dumps(b.to_json())}" for a, b in pairs)
    _emit(args, payload, text)
    return 0


def cmd_max_family(args) -> int:
    fam = max_family(args.q, args.n)
    if args.size_only:
        _emit(args, {"q": args.q, "n": args.n, "size": fam.size}, str(fam.size))
        return 0
    payload = fam.to_json()
    try:
        payload["maximal"] = not is_extendable(fam)
    except ValueError:
        payload["maximal"] = None  # too many candidates to check
    _emit(args, payload, "\n".join(repr(p) for p in fam.polynomials))
    return 0


def cmd_search_nonlinear(args) -> int:
    threads = args.threads if args.threads is not None else _default_threads()
    if args.d >= 6 and not args.confirm_long:
        raise UsageError(f"--d {args.d} is a long-running search; add --confirm-long")

    def report(done, total):
        print(f"chunk {done}/{total}", file=sys.stderr)

    hits = search_orthogonal(args.d, nonlinear_only=args.nonlinear_only, threads=threads,
                             checkpoint=args.checkpoint, allow_long=args.confirm_long,
                             progress=report if args.progress else None)
    if args.unordered:
        hits = [h for h in hits if h.pair.codes()[0] <= h.pair.codes()[1]]
    payload = {"d": args.d, "nonlinear_only": args.nonlinear_only, "count": len(hits),
               "pairs": [h.to_json() for h in hits]}
    _emit(args, payload, "\n".join(h.format_line() for h in hits))
    return 0


def _rng(args):
    return np.random.default_rng(args.seed)


def cmd_sss_deal(args) -> int:
    family = load_family(args.family)
    rules = validate_family(family)
    n = rules[0].q ** (rules[0].d - 1)
    secret = args.secret - 1
    if args.randomness is not None:
        r = args.randomness - 1
    else:
        r = int(_rng(args).integers(0, n))
    shares = deal(secret, r, family)
    payload = {"shares": [s.to_json() for s in shares]}
    _emit(args, payload, " ".join(f"{s.player}:{s.value + 1}" for s in shares))
    return 0


def _parse_share(text: str) -> Share:
    m = re.match(r"^(\d+):(\d+)$", text)
    if not m:
        raise UsageError(f"share must look like PLAYER:VALUE, got {text!r}")
    return Share(int(m.group(1)), int(m.group(2)) - 1)


def cmd_sss_reconstruct(args) -> int:
    family = load_family(args.family)
    validate_family(family)
    if len(args.shares) != 2:
        raise UsageError("give exactly two shares")
    a, b = (_parse_share(s) for s in args.shares)
    secret = reconstruct(a, b, family, args.method)
    _emit(args, {"secret": secret + 1}, str(secret + 1))
    return 0


def cmd_sss_audit(args) -> int:
    family = load_family(args.family)
    rules = validate_family(family)
    n = rules[0].q ** (rules[0].d - 1)
    table = secrecy_audit(family, args.player)
    uniform = audit_is_uniform(table, n)
    payload = {"player": args.player, "uniform": uniform,
               "table": {str(b + 1): [s + 1 for s in v] for b, v in table.items()}}
    _emit(args, payload, "uniform" if uniform else "NOT uniform")
    return 0 if uniform else 2


def _prng(args) -> OcaPrng:
    f, g = load_pair(args.pair)
    return OcaPrng(f, g)


def cmd_prng_stream(args) -> int:
    gen = _prng(args)
    if gen.q != 2:
        raise UsageError("hex streams need a binary pair")
    if args.seed_hex is not None:
        raw = bytes.fromhex(args.seed_hex)
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        if len(bits) < gen.width or bits[gen.width:].any():
            raise UsageError(f"seed must encode exactly {gen.width} cells")
        seed = tuple(int(b) for b in bits[:gen.width])
    else:
        seed = tuple(int(b) for b in _rng(args).integers(0, 2, gen.width))
    bits = gen.keystream_bits(seed, args.bits)
    _emit(args, {"seed": "".join(map(str, seed)), "bits": args.bits, "stream": stream_hex(bits)},
          stream_hex(bits))
    return 0


def cmd_prng_cycles(args) -> int:
    gen = _prng(args)
    rep = cycle_report(gen)
    payload = rep.to_json()
    payload["verified"] = verify_cycle_report(gen, rep)
    _emit(args, payload)
    return 0 if payload["verified"] else 2


def cmd_prng_report(args) -> int:
    gen = _prng(args)
    _emit(args, max_period_report(gen).to_json())
    return 0


def cmd_bent(args) -> int:
    family = load_family(args.family) if args.family else max_family(2, args.b)
    f = bent_from_family(family, args.b)
    payload = {"n": f.n, "table": f.to_hex(), "bent": is_bent(f), "nonlinearity": nonlinearity(f),
               "walsh": walsh_transform(f).tolist()}
    _emit(args, payload, f"{f.to_hex()} nl={payload['nonlinearity']} bent={payload['bent']}")
    return 0


def cmd_ci(args) -> int:
    family = load_family(args.family)
    f = ci_function_from_family(family, coordinates=not args.outputs_only)
    order = ci_order(f)
    payload = {"n": f.n, "weight": f.weight, "ci_order": order, "table": f.to_hex()}
    _emit(args, payload, f"n={f.n} weight={f.weight} ci_order={order}")
    return 0


def _read_matrix(path: str) -> np.ndarray:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith(("{", "[")):
        data = json.loads(text)
        return np.array(data["matrix"] if isinstance(data, dict) else data, dtype=np.int64)
    rows = [list(map(int, line.split())) for line in text.splitlines() if line.strip()]
    if len({len(r) for r in rows}) > 1:
        raise UsageError("rows have different lengths")
    return np.array(rows, dtype=np.int64)


def cmd_oa_strength(args) -> int:
    if args.family:
        squares = family_to_mols(load_family(args.family))
        m = mols_to_oa(squares).matrix
        if args.binary:
            m = binary_expand(m, squares[0].shape[0])
    elif args.input:
        m = _read_matrix(args.input)
    else:
        raise UsageError("give --input or --family")
    t = oa_strength(m, args.t_max, args.symbols)
    _emit(args, {"rows": int(m.shape[0]), "columns": int(m.shape[1]), "strength": t}, str(t))
    if args.print_rows:
        print(format_rows(m))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mocakit", description="Combinatorial designs from cellular automata.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--output", help="also write the JSON result to this file")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("latin", parents=[common], help="Cayley-table Latin square of a rule")
    s.add_argument("--rule", required=True)
    s.set_defaults(func=cmd_latin)

    s = sub.add_parser("orthogonal", parents=[common], help="test two rules for orthogonality")
    s.add_argument("--pair", required=True, help="pair JSON file or RULE/RULE")
    s.set_defaults(func=cmd_orthogonal)

    s = sub.add_parser("enumerate-linear", parents=[common], help="coprime polynomial pairs")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate_linear)

    s = sub.add_parser("max-family", parents=[common], help="maximal linear orthogonal family")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--size-only", action="store_true")
    s.set_defaults(func=cmd_max_family)

    s = sub.add_parser("search-nonlinear", parents=[common], help="exhaustive orthogonal pair search")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--nonlinear-only", action="store_true")
    s.add_argument("--unordered", action="store_true", help="keep one pair per unordered pair")
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--checkpoint")
    s.add_argument("--confirm-long", action="store_true")
    s.add_argument("--progress", action="store_true")
    s.set_defaults(func=cmd_search_nonlinear)

    s = sub.add_parser("sss", help="threshold secret sharing")
    ss = s.add_subparsers(dest="action", required=True)
    a = ss.add_parser("deal", parents=[common])
    a.add_argument("--family", required=True)
    a.add_argument("--secret", type=int, required=True, help="1-based secret")
    a.add_argument("--randomness", type=int, help="1-based dealer randomness (default: sampled)")
    a.set_defaults(func=cmd_sss_deal)
    a = ss.add_parser("reconstruct", parents=[common])
    a.add_argument("--family", required=True)
    a.add_argument("--shares", nargs="+", required=True, help="PLAYER:VALUE, 1-based")
    a.add_argument("--method", choices=["auto", "linear", "coupled"], default="auto")
    a.set_defaults(func=cmd_sss_reconstruct)
    a = ss.add_parser("audit", parents=[common])
    a.add_argument("--family", required=True)
    a.add_argument("--player", type=int, default=1)
    a.set_defaults(func=cmd_sss_audit)

    s = sub.add_parser("prng", help="orthogonal-CA generator")
    ss = s.add_subparsers(dest="action", required=True)
    a = ss.add_parser("stream", parents=[common])
    a.add_argument("--pair", required=True)
    a.add_argument("--seed-hex")
    a.add_argument("--bits", type=int, required=True)
    a.set_defaults(func=cmd_prng_stream)
    a = ss.add_parser("cycles", parents=[common])
    a.add_argument("--pair", required=True)
    a.set_defaults(func=cmd_prng_cycles)
    a = ss.add_parser("report", parents=[common])
    a.add_argument("--pair", required=True)
    a.set_defaults(func=cmd_prng_report)

    s = sub.add_parser("bent", parents=[common], help="bent function from a degree-1/2 family")
    s.add_argument("--b", type=int, default=2)
    s.add_argument("--family")
    s.set_defaults(func=cmd_bent)

    s = sub.add_parser("ci", parents=[common], help="correlation-immune function from a family")
    s.add_argument("--family", required=True)
    s.add_argument("--outputs-only", action="store_true",
                   help="drop the two coordinate columns from the orthogonal array")
    s.set_defaults(func=cmd_ci)

    s = sub.add_parser("oa-strength", parents=[common], help="strength of an orthogonal array")
    s.add_argument("--input", help="text rows or JSON matrix")
    s.add_argument("--family")
    s.add_argument("--binary", action="store_true")
    s.add_argument("--t-max", type=int)
    s.add_argument("--symbols", type=int)
    s.add_argument("--print-rows", action="store_true")
    s.set_defaults(func=cmd_oa_strength)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuleError, ShareError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
