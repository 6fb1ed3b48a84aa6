"""Command-line surface: every pipeline with machine-readable output.

Subcommands: basis, hecke, eigen, relations, fourier, verify.  Operator
specs use the grammar T:p, T1:p, S1:q, S2:q, U:Q,P and compose into words
with ';'.  Output is JSON (eigenvalue tables may also be CSV); identical
inputs produce byte-identical output.  Usage errors exit 2, domain errors
exit 1.  The environment variable SIEGELEIS_CONDUCTOR_CAP overrides the
cyclotomic conductor cap.
"""

from __future__ import annotations

import argparse
import json
import sys

from .characters import DirichletCharacter
from .eisspace import Partition, enumerate_partitions, prime_factors
from .fourier import (UOperator, apply_U, calibrate_normalization,
                      krylov_spectral, project_components, provider_load)
from .hecke import (HeckeOp, SpaceOperators, compare_eigenvalues, eigenbasis,
                    s_operator)
from .linalg import CycMatrix
from .verify import PRESETS, run_suite


def _parse_op_token(tok: str):
    tok = tok.strip()
    kind, _, rest = tok.partition(":")
    if not rest:
        raise ValueError(f"bad operator spec {tok!r}")
    if kind in ("T", "T1"):
        return HeckeOp(kind, int(rest))
    if kind in ("S1", "S2"):
        return (kind, int(rest))
    if kind == "U":
        q_s, _, p_s = rest.partition(",")
        if not p_s:
            raise ValueError(f"bad U operator spec {tok!r}; want U:Q,P")
        return UOperator(int(q_s), int(p_s))
    raise ValueError(f"unknown operator kind {kind!r} in {tok!r}")


def parse_op_word(text: str) -> list:
    return [_parse_op_token(tok) for tok in text.split(";") if tok.strip()]


def _space_from_args(args):
    char = DirichletCharacter.parse(args.level, args.char)
    return enumerate_partitions(args.level, char, args.weight)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_basis(args) -> int:
    space = _space_from_args(args)
    _emit_json(args, space.descriptor())
    return 0


def _word_matrix(ops: SpaceOperators, word) -> CycMatrix:
    mat = CycMatrix.identity(ops.space.dimension)
    for op in word:
        if isinstance(op, HeckeOp):
            mat = mat @ ops.matrix(op).mat
        else:
            which, q = op
            mat = mat @ s_operator(ops, q, which).mat
    return mat


def cmd_hecke(args) -> int:
    space = _space_from_args(args)
    word = parse_op_word(args.op)
    if not word:
        raise ValueError("empty operator word")
    if any(isinstance(op, UOperator) for op in word):
        raise ValueError("U operators act on Fourier expansions; use `fourier`")
    ops = SpaceOperators(space)
    mat = _word_matrix(ops, word)
    _emit_json(args, {
        "level": space.level,
        "weight": space.weight,
        "char": space.char.spec_string(),
        "op": args.op,
        "basis": [p.to_json() for p in space.basis],
        "matrix": mat.to_json(),
    })
    return 0


def cmd_eigen(args) -> int:
    space = _space_from_args(args)
    ops = SpaceOperators(space)
    op_list = ops.level_ops()
    if args.primes:
        for p in (int(t) for t in args.primes.split(",") if t.strip()):
            for kind in ("T", "T1"):
                op = HeckeOp(kind, p)
                ops.matrix(op)
                if op not in op_list:
                    op_list.append(op)
    system = eigenbasis(ops)
    comparison = compare_eigenvalues(ops, op_list)
    if args.format == "csv":
        lines = ["partition,op,eigenvalue,closed_form,match"]
        for row in comparison:
            part = row["partition"]
            lines.append(
                f"({part['N0']};{part['N1']};{part['N2']}),{row['op']},"
                f"{_cyc_str(row['matrix_value'])},{_cyc_str(row['closed_form'])},"
                f"{str(row['match']).lower()}"
            )
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit_json(args, {
        "space": space.descriptor(),
        "eigenbasis": system.to_json(),
        "comparison": comparison,
    })
    return 0


def _cyc_str(obj) -> str:
    from .cyclotomic import CycNum

    v = CycNum.from_json(obj)
    return repr(v).replace(" ", "")


def cmd_relations(args) -> int:
    from .hecke import s_constant, s_word

    char = DirichletCharacter.trivial(args.level)
    space = enumerate_partitions(args.level, char, args.weight)
    ops = SpaceOperators(space)
    corner = space.index_of(Partition(space.level, 1, 1))
    results = []
    all_ok = True
    for rho in space.basis:
        word = s_word(ops, rho.n1, rho.n2)
        row = word.data[corner]
        ok = all(
            (v == (1 if j == space.index_of(rho) else 0))
            for j, v in enumerate(row)
        )
        all_ok = all_ok and ok
        results.append({
            "target": rho.to_json(),
            "word": f"S1:{rho.n1};S2:{rho.n2}",
            "holds": ok,
        })
    _emit_json(args, {
        "level": space.level,
        "weight": space.weight,
        "constants": {
            str(q): s_constant(space, q).to_json()
            for q in prime_factors(space.level)
        },
        "identities": results,
        "all_hold": all_ok,
    })
    return 0 if all_ok else 1


def cmd_fourier(args) -> int:
    provider = provider_load(args.provider)
    if args.calibrate:
        report = calibrate_normalization(
            provider, args.level, provider.weight, args.sample_bound
        )
        _emit_json(args, report)
        return 0
    if args.apply:
        word = parse_op_word(args.apply)
        if not all(isinstance(op, UOperator) for op in word):
            raise ValueError("`fourier --apply` takes U:Q,P operators only")
        exp = provider.expansion
        for u in word:
            exp = apply_U(exp, u)
        _emit_json(args, exp.to_json())
        return 0
    if args.ops:
        word = parse_op_word(args.ops)
        if not all(isinstance(op, UOperator) for op in word):
            raise ValueError("`fourier --ops` takes U:Q,P operators only")
        comps = krylov_spectral(provider.expansion, word, args.sample_bound)
        _emit_json(args, [
            {
                "eigenvalues": {
                    u.spec_string(): lam.to_json()
                    for u, lam in c.eigenvalues.items()
                },
                "expansion": c.expansion.to_json(),
            }
            for c in comps
        ])
        return 0
    labeled = project_components(
        provider, args.level, provider.weight, args.sample_bound
    )
    _emit_json(args, {
        "level": args.level,
        "weight": provider.weight,
        "components": [
            {
                "partition": rho.to_json(),
                "eigenvalues": {
                    u.spec_string(): lam.to_json()
                    for u, lam in sorted(
                        comp.eigenvalues.items(), key=lambda t: (t[0].Q, t[0].P)
                    )
                },
                "expansion": comp.expansion.to_json(),
            }
            for rho, comp in labeled
        ],
    })
    return 0


def cmd_verify(args) -> int:
    if args.preset:
        config = dict(PRESETS[args.preset])
    else:
        config = {
            "N_max": args.n_max,
            "k_set": [int(t) for t in args.k_set.split(",")],
            "prime_max": args.prime_max,
            "char_orders": [int(t) for t in args.char_orders.split(",")],
            "trials": args.trials,
            "seed": args.seed,
        }
    report = run_suite(config)
    _emit_json(args, report.to_json())
    for name, dt in report.timings.items():
        print(f"# {name}: {dt:.2f}s", file=sys.stderr)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siegeleis",
        description="Exact Hecke computations on degree-2 Siegel Eisenstein "
        "series of square-free level",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, char=True):
        p.add_argument("--level", type=int, required=True)
        p.add_argument("--weight", type=int, required=True)
        if char:
            p.add_argument("--char", default="1",
                           help="character spec 'q1:j1,q2:j2' or '1'")
        p.add_argument("--output", default=None, help="write to file")

    p = sub.add_parser("basis", help="list the valid partitions")
    common(p)
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("hecke", help="action table of an operator word")
    common(p)
    p.add_argument("--op", required=True,
                   help="word over T:p, T1:p, S1:q, S2:q joined by ';'")
    p.set_defaults(fn=cmd_hecke)

    p = sub.add_parser("eigen", help="eigenbasis and eigenvalue comparison")
    common(p)
    p.add_argument("--primes", default="",
                   help="extra primes p (comma separated) for T(p), T1(p^2)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_eigen)

    p = sub.add_parser("relations",
                       help="corner-to-basis word identities (trivial char)")
    common(p, char=False)
    p.set_defaults(fn=cmd_relations)

    p = sub.add_parser("fourier", help="coefficient pipelines on a provider")
    p.add_argument("--provider", required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--sample-bound", type=int, default=2)
    p.add_argument("--apply", default="", help="apply a word of U:Q,P operators")
    p.add_argument("--ops", default="",
                   help="split by these U:Q,P operators instead of the "
                        "default level projection")
    p.add_argument("--calibrate", action="store_true",
                   help="emit the normalization calibration report")
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_fourier)

    p = sub.add_parser("verify", help="run the oracle suite")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--k-set", default="4,5")
    p.add_argument("--prime-max", type=int, default=5)
    p.add_argument("--char-orders", default="1,2")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--output", default=None)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
