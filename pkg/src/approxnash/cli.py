"""Command-line front end.

Exit codes: 0 success, 1 nothing found, 2 input error, 3 budget exceeded.
Randomised commands print the seed they used on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from typing import Optional, Sequence

from approxnash import bimatrix, cover, experiments, indicators, instances
from approxnash.errors import BudgetExceeded, ConsistencyError
from approxnash.games import (
    BimatrixGame,
    MixedPair,
    anonymous_regret,
    bimatrix_regret,
    load_game,
    load_profile,
)
from approxnash.moment_search import brute_force_grid_nash, moment_search, structural_params

EXIT_OK, EXIT_NOT_FOUND, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def _emit(obj, out: Optional[str] = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_csv(rows: list, columns: list, out: Optional[str]) -> None:
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out:
            fh.close()


def _seed_note(seed: int) -> None:
    print(f"seed: {seed}", file=sys.stderr)


def cmd_verify(args) -> int:
    game = load_game(_read_json(args.game))
    profile = load_profile(_read_json(args.profile))
    if isinstance(game, BimatrixGame):
        if not isinstance(profile, MixedPair):
            raise InputError("bimatrix games need an {x, y} profile")
        regrets = list(bimatrix_regret(game, profile, mode=args.mode))
    else:
        if isinstance(profile, MixedPair):
            raise InputError("anonymous games need a {q} profile")
        regrets = anonymous_regret(game, profile).tolist()
    worst = max(regrets) if regrets else 0.0
    ok = worst <= args.epsilon
    _emit({"regrets": regrets, "max_regret": worst, "epsilon": args.epsilon, "is_eps_nash": ok})
    return EXIT_OK if ok else EXIT_NOT_FOUND


def _load_bimatrix(path: str) -> BimatrixGame:
    game = load_game(_read_json(path))
    if not isinstance(game, BimatrixGame):
        raise InputError("expected a bimatrix game")
    return game


def cmd_bimatrix_solve_sparse(args) -> int:
    game = _load_bimatrix(args.game)
    pair, bound = bimatrix.solve_sparse(game)
    regrets = bimatrix_regret(game, pair)
    _emit({"profile": pair.to_json(), "sparsity": bimatrix.sparsity(game), "regret_bound": bound,
           "regrets": list(regrets)}, args.output)
    return EXIT_OK


def cmd_bimatrix_sample(args) -> int:
    game = _load_bimatrix(args.game)
    _seed_note(args.seed)
    report = bimatrix.oblivious_sampler(game, args.epsilon, args.max_trials, seed=args.seed,
                                        stop_at_first=not args.all_trials, mode=args.mode, t=args.t)
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.successes else EXIT_NOT_FOUND


def cmd_anon_solve(args) -> int:
    game = load_game(_read_json(args.game))
    if isinstance(game, BimatrixGame):
        raise InputError("expected an anonymous game")
    params = structural_params(args.epsilon, c=args.c, k=args.k, d=args.d, verify_output=not args.no_verify)
    start = time.perf_counter()
    result = moment_search(game, params, run_case2=not args.skip_case2)
    wall = time.perf_counter() - start
    if result is None:
        _emit({"profile": None, "max_regret": None, "guess_used": None, "wall_time": wall}, args.output)
        return EXIT_NOT_FOUND
    guess = None if result.guess is None else result.guess.to_json(params.K)
    _emit({"profile": result.profile.to_json(), "max_regret": result.max_regret, "guess_used": guess,
           "source": result.source, "k": params.k, "d": params.d, "wall_time": wall}, args.output)
    return EXIT_OK


def cmd_anon_oracle(args) -> int:
    game = load_game(_read_json(args.game))
    if isinstance(game, BimatrixGame):
        raise InputError("expected an anonymous game")
    found = brute_force_grid_nash(game, args.grid, args.epsilon)
    _emit({"grid": args.grid, "epsilon": args.epsilon, "count": len(found),
           "profiles": [p.q.tolist() for p in found]}, args.output)
    return EXIT_OK if found else EXIT_NOT_FOUND


def cmd_cover_build(args) -> int:
    built = cover.build_cover(args.n, args.k, args.d)
    _emit(built.to_json(), args.output)
    print(f"elements: {len(built.elements)} (binomial {built.binomial_count}, sparse {built.sparse_count})",
          file=sys.stderr)
    return EXIT_OK


def cmd_cover_check(args) -> int:
    loaded = cover.Cover.from_json(_read_json(args.cover))
    element, tv = cover.cover_check(loaded, args.probs)
    _emit({"element": element.to_json(), "tv": tv})
    return EXIT_OK


def cmd_pbd(args) -> int:
    if args.pbd_command == "pmf":
        _emit({"pmf": indicators.pbd_pmf(args.probs).tolist()})
    elif args.pbd_command == "tv":
        a, b = indicators.pbd_pmf(args.a), indicators.pbd_pmf(args.b)
        _emit({"tv": indicators.tv_distance(a, b)})
    elif args.pbd_command == "moments":
        prof = indicators.moment_profile(args.probs, args.d)
        _emit({"power_sums": indicators.power_sums(args.probs, args.d).tolist(),
               "raw_moments": indicators.raw_moments(indicators.pbd_pmf(args.probs), args.d).tolist(),
               "profile": {"low": list(prof.low), "high": list(prof.high), "ones": prof.ones}})
    elif args.pbd_command == "roos":
        out = {"roos_bound": indicators.roos_bound(args.d)} if args.d is not None else {}
        if args.probs:
            out["expansion"] = indicators.roos_expansion(args.probs, args.p, args.L).tolist()
            out["pmf"] = indicators.pbd_pmf(args.probs).tolist()
        _emit(out)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.gen_command == "gs":
        game = instances.gen_gs_game(args.ell, args.S)
    elif args.gen_command == "gp":
        game = instances.gen_gp_game(args.k, args.p, args.delta)
    else:
        _seed_note(args.seed)
        if args.kind == "sparse":
            game = instances.gen_random_sparse(args.n, args.k, args.seed)
        else:
            game = instances.gen_random_anonymous(args.n, args.seed)
    _emit(game.to_json(), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.sweep_command == "tv":
        rows = experiments.tv_sweep(args.n, args.grid, args.d, args.side)
        _emit_csv(rows, experiments.TV_COLUMNS, args.output)
    else:
        game = _load_bimatrix(args.game) if args.game else instances.matching_pennies(args.size)
        print(f"seeds: {' '.join(map(str, args.seeds))}", file=sys.stderr)
        rows = experiments.sampler_sweep(game, args.eps, args.seeds, args.trials)
        _emit_csv(rows, experiments.SAMPLER_COLUMNS, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="approxnash", description="Approximate Nash equilibria toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="regret of a profile")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--mode", choices=["well_supported", "expected"], default="well_supported")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bimatrix", help="bimatrix solvers")
    bsub = p.add_subparsers(dest="bimatrix_command", required=True)
    q = bsub.add_parser("solve-sparse")
    q.add_argument("game")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_bimatrix_solve_sparse)
    q = bsub.add_parser("sample")
    q.add_argument("game")
    q.add_argument("--epsilon", type=float, required=True)
    q.add_argument("--max-trials", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--t", type=int, default=None, help="multiset size (default ceil(16 ln n / eps^2))")
    q.add_argument("--all-trials", action="store_true", help="run every trial and count successes")
    q.add_argument("--mode", choices=["well_supported", "expected"], default="well_supported")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_bimatrix_sample)

    p = sub.add_parser("anon", help="anonymous game solvers")
    asub = p.add_subparsers(dest="anon_command", required=True)
    q = asub.add_parser("solve")
    q.add_argument("game")
    q.add_argument("--epsilon", type=float, required=True)
    q.add_argument("--k", type=int, default=None)
    q.add_argument("--d", type=int, default=None)
    q.add_argument("--c", type=float, default=1.0)
    q.add_argument("--no-verify", action="store_true")
    q.add_argument("--skip-case2", action="store_true")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_anon_solve)
    q = asub.add_parser("oracle")
    q.add_argument("game")
    q.add_argument("--grid", type=int, required=True)
    q.add_argument("--epsilon", type=float, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_anon_oracle)

    p = sub.add_parser("cover", help="sparse cover of indicator sums")
    csub = p.add_subparsers(dest="cover_command", required=True)
    q = csub.add_parser("build")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_cover_build)
    q = csub.add_parser("check")
    q.add_argument("cover")
    q.add_argument("--probs", type=float, nargs="+", required=True)
    q.set_defaults(func=cmd_cover_check)

    p = sub.add_parser("pbd", help="sums of independent indicators")
    psub = p.add_subparsers(dest="pbd_command", required=True)
    q = psub.add_parser("pmf")
    q.add_argument("--probs", type=float, nargs="*", required=True)
    q = psub.add_parser("tv")
    q.add_argument("--a", type=float, nargs="*", required=True)
    q.add_argument("--b", type=float, nargs="*", required=True)
    q = psub.add_parser("moments")
    q.add_argument("--probs", type=float, nargs="*", required=True)
    q.add_argument("--d", type=int, required=True)
    q = psub.add_parser("roos")
    q.add_argument("--probs", type=float, nargs="*", default=None)
    q.add_argument("--p", type=float, default=None)
    q.add_argument("--L", type=int, default=None)
    q.add_argument("--d", type=int, default=None, help="also report the TV bound at depth d")
    p.set_defaults(func=cmd_pbd)

    p = sub.add_parser("gen", help="game generators")
    gsub = p.add_subparsers(dest="gen_command", required=True)
    q = gsub.add_parser("gs")
    q.add_argument("--ell", type=int, required=True)
    q.add_argument("--S", type=int, nargs="*", default=None, help="0-based hidden set")
    q.add_argument("-o", "--output")
    q = gsub.add_parser("gp")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--delta", type=float, required=True)
    q.add_argument("--p", type=float, nargs="+", required=True)
    q.add_argument("-o", "--output")
    q = gsub.add_parser("random")
    q.add_argument("--kind", choices=["sparse", "anonymous"], required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="CSV parameter sweeps")
    ssub = p.add_subparsers(dest="sweep_command", required=True)
    q = ssub.add_parser("tv", help="max TV between matched-moment grid collections")
    q.add_argument("--n", type=int, nargs="*", default=[2, 3, 4])
    q.add_argument("--d", type=int, nargs="*", default=[1, 2, 3])
    q.add_argument("--grid", type=int, default=20)
    q.add_argument("--side", choices=["low", "high"], nargs="*", default=["low"])
    q.add_argument("-o", "--output")
    q = ssub.add_parser("sampler", help="oblivious sampler success rates")
    q.add_argument("--game", default=None, help="bimatrix game JSON (default matching pennies)")
    q.add_argument("--size", type=int, default=2, help="matching pennies size when no game is given")
    q.add_argument("--eps", type=float, nargs="*", default=[0.4, 0.6])
    q.add_argument("--seeds", type=int, nargs="*", default=[0])
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)
    return parser


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, TypeError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
