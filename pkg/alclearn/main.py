"""Command-line entry point for alclearn."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from alclearn import __version__
from alclearn.concepts import render_concept
from alclearn.config import DEFAULT_SIZE_CONSTRAINT, HeuristicParams, SearchConfig, settings
from alclearn.config_manager import ConfigManager
from alclearn.embeddings import save_embeddings
from alclearn.errors import AlcLearnError, ConfigurationError
from alclearn.heuristics import LearningProblem
from alclearn.knowledge import KnowledgeBase, load_kb
from alclearn.logging_utils import configure_logging, get_logger
from alclearn.lpgen import load_learning_problems, partition_by_target, problem_from_names, save_learning_problems
from alclearn.services.evaluation import EvaluationService, aggregate, format_aggregate_table
from alclearn.services.generation import GenerationService
from alclearn.services.learning import LearningService
from alclearn.services.training import TrainingService
from alclearn.types import METHODS, Method

logger = get_logger(__name__)


def _names(value: str) -> list[str]:
    return [name.strip() for name in value.split(",") if name.strip()]


def _methods(value: str) -> list[str]:
    methods = _names(value)
    unknown = [method for method in methods if method not in METHODS]
    if unknown or not methods:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {', '.join(METHODS)}")
    return methods


def _add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-runtime", type=float, help="Search budget in seconds.")
    parser.add_argument("--max-expressions", type=int, help="Cap on concepts tested per search.")
    parser.add_argument("--quality", choices=("f_measure", "accuracy_simple", "accuracy_celoe"))
    parser.add_argument("--max-length", type=int, help="Longest concept the search refines to.")
    parser.add_argument("--embeddings", type=Path, help="Embedding CSV for drill (generated when omitted).")
    parser.add_argument("--embedding-seed", type=int, help="Seed of generated embeddings.")


def _add_heuristic_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lam", type=float, help="Accuracy-gain weight.")
    parser.add_argument("--beta", type=float, help="Length penalty.")
    parser.add_argument("--t", type=float, help="Coverage weight of the CELOE accuracy.")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Seed of every random choice (default: 0).")
    common.add_argument("--config", type=Path, help="Runtime defaults document (default: CONFIG_PATH).")
    common.add_argument("--log-level", help="Logging level (default: LOG_LEVEL).")

    parser = argparse.ArgumentParser(
        prog="alclearn",
        description="Learn ALC class expressions from positive and negative examples.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    learn = commands.add_parser("learn", parents=[common], help="Run one search.")
    learn.add_argument("kb", type=Path)
    learn.add_argument("--lps", type=Path, help="Learning-problem file.")
    learn.add_argument("--lp-id", help="Problem to run from --lps (default: the first).")
    learn.add_argument("--positives", type=_names, help="Comma-separated positive individuals.")
    learn.add_argument("--negatives", type=_names, help="Comma-separated negative individuals.")
    learn.add_argument("--method", choices=METHODS, default="celoe")
    learn.add_argument("--model", type=Path, help="Checkpoint for --method drill.")
    learn.add_argument("--trace", action="store_true", help="Print every scored concept as JSON lines.")
    _add_search_flags(learn)
    _add_heuristic_flags(learn)

    train = commands.add_parser("train", parents=[common], help="Train the Q-network.")
    train.add_argument("kb", type=Path)
    source = train.add_mutually_exclusive_group(required=True)
    source.add_argument("--lps", type=Path, help="Learning-problem file.")
    source.add_argument("--generate", action="store_true", help="Generate learning problems first.")
    train.add_argument("--train-size", type=int, help="Keep only this many problems (split by target).")
    train.add_argument("--held-out", type=Path, help="Write the problems left out by --train-size to this file.")
    train.add_argument("--out", type=Path, required=True, help="Checkpoint path.")
    train.add_argument("--embeddings", type=Path, help="Embedding CSV (generated when omitted).")
    train.add_argument("--embedding-seed", type=int)
    train.add_argument("--dim", type=int, help="Dimension of generated embeddings.")
    train.add_argument("--episodes", type=int)
    train.add_argument("--steps", type=int, help="Refinement steps per episode.")
    train.add_argument("--update-every", type=int)
    train.add_argument("--batch", type=int)
    train.add_argument("--gamma", type=float)
    train.add_argument("--epsilon-decay", type=float)
    train.add_argument("--learning-rate", type=float)
    train.add_argument("--hidden", type=int)
    train.add_argument("--maxreward", type=float)
    _add_heuristic_flags(train)

    generate = commands.add_parser("generate-lps", parents=[common], help="Generate learning problems.")
    generate.add_argument("kb", type=Path)
    generate.add_argument("--out", type=Path, required=True)
    generate.add_argument("--n", type=int, help="States stored per walk.")
    generate.add_argument("--m", type=int, help="Number of walks.")
    generate.add_argument("--kappa", type=int, help="Balanced draws per concept.")
    generate.add_argument("--maxlen", type=int)
    generate.add_argument("--size-constraint", action="store_true", help="Keep concepts covering 10-30%% of individuals.")
    generate.add_argument("--min-frac", type=float)
    generate.add_argument("--max-frac", type=float)

    evaluate = commands.add_parser("evaluate", parents=[common], help="Run methods over a problem file.")
    evaluate.add_argument("kb", type=Path)
    evaluate.add_argument("lps", type=Path)
    evaluate.add_argument("--methods", type=_methods, default=["celoe"], help="Comma-separated methods.")
    evaluate.add_argument("--model", type=Path, help="Checkpoint for drill.")
    evaluate.add_argument("--out", type=Path, required=True, help="Results CSV.")
    evaluate.add_argument("--workers", type=int, help="Parallel cells (default: ALCLEARN_WORKERS).")
    _add_search_flags(evaluate)
    _add_heuristic_flags(evaluate)

    embed = commands.add_parser("embed", parents=[common], help="Write generated embeddings.")
    embed.add_argument("kb", type=Path)
    embed.add_argument("--dim", type=int)
    embed.add_argument("--noise", type=float, help="Noise scale.")
    embed.add_argument("--out", type=Path, required=True)
    return parser


def _heuristic_params(manager: ConfigManager, args: argparse.Namespace) -> HeuristicParams:
    return manager.heuristic_params(lam=args.lam, beta=args.beta, t=args.t)


def _search_config(manager: ConfigManager, args: argparse.Namespace, *, keep_trace: bool = False) -> SearchConfig:
    return manager.search_config(
        max_runtime_seconds=args.max_runtime,
        max_expressions_tested=args.max_expressions,
        quality_metric=args.quality,
        refinement_max_length=args.max_length,
        heuristic_params=_heuristic_params(manager, args),
        ocel_params=manager.ocel_params(lam=args.lam, beta=args.beta, t=args.t),
        seed=args.seed,
        keep_trace=keep_trace,
    )


def _select_problem(kb: KnowledgeBase, args: argparse.Namespace) -> LearningProblem:
    if args.lps is not None:
        problems = load_learning_problems(args.lps, kb)
        if not problems:
            raise ConfigurationError(f"{args.lps} holds no learning problem")
        if args.lp_id is None:
            return problems[0]
        for lp in problems:
            if lp.lp_id == args.lp_id:
                return lp
        raise ConfigurationError(f"no learning problem {args.lp_id!r} in {args.lps}")
    if not args.positives or not args.negatives:
        raise ConfigurationError("learn needs --lps or both --positives and --negatives")
    return problem_from_names(kb, args.positives, args.negatives, lp_id=args.lp_id or "inline")


def cmd_learn(manager: ConfigManager, args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    lp = _select_problem(kb, args)
    service = LearningService(config_manager=manager)
    drill = None
    if args.method == "drill":
        if args.model is None:
            raise ConfigurationError("method drill needs --model")
        drill = service.load_drill_assets(
            kb, args.model, embeddings_path=args.embeddings, embedding_seed=args.embedding_seed
        )
    outcome = service.learn(
        kb=kb,
        lp=lp,
        method=args.method,
        search_config=_search_config(manager, args, keep_trace=args.trace),
        drill=drill,
    )
    if outcome.result.trace is not None:
        for entry in outcome.result.trace:
            print(
                json.dumps(
                    {
                        "concept": render_concept(entry.concept),
                        "quality": entry.quality,
                        "heuristic": entry.heuristic_value,
                    }
                )
            )
    row = outcome.row
    print(
        f"{row.lp_id} [{row.method}] {row.concept} | length={row.length} f1={row.f1:.4f} "
        f"accuracy={row.accuracy:.4f} runtime_s={row.runtime_s:.3f} expressions={row.expressions_tested} "
        f"stop={outcome.result.stop_reason}"
    )
    print(row.model_dump_json())
    return 0


def cmd_train(manager: ConfigManager, args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    if args.generate:
        lps = GenerationService(config_manager=manager).generate(kb, seed=args.seed)
    else:
        lps = load_learning_problems(args.lps, kb)
    if args.held_out is not None and args.train_size is None:
        raise ConfigurationError("--held-out needs --train-size")
    if args.train_size is not None:
        lps, held_out = partition_by_target(lps, args.train_size, args.seed)
        logger.info("Problems split by target | train=%d held_out=%d", len(lps), len(held_out))
        if args.held_out is not None:
            save_learning_problems(held_out, args.held_out)

    service = TrainingService(config_manager=manager)
    table = service.embeddings(kb, path=args.embeddings, dimension=args.dim, seed=args.embedding_seed)
    _, report = service.train(
        kb=kb,
        table=table,
        lps=lps,
        out=args.out,
        heuristic_params=_heuristic_params(manager, args),
        episodes=args.episodes,
        steps_per_episode=args.steps,
        update_every=args.update_every,
        batch_size=args.batch,
        gamma=args.gamma,
        epsilon_decay=args.epsilon_decay,
        learning_rate=args.learning_rate,
        hidden=args.hidden,
        max_reward=args.maxreward,
        seed=args.seed,
    )
    print("episode,loss")
    for episode, loss in report.losses:
        print(f"{episode},{loss!r}")
    return 0


def cmd_generate_lps(manager: ConfigManager, args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    size_constraint = None
    if args.size_constraint or args.min_frac is not None or args.max_frac is not None:
        low, high = DEFAULT_SIZE_CONSTRAINT
        size_constraint = (
            args.min_frac if args.min_frac is not None else low,
            args.max_frac if args.max_frac is not None else high,
        )
    problems = GenerationService(config_manager=manager).generate(
        kb,
        out=args.out,
        n=args.n,
        m=args.m,
        kappa=args.kappa,
        maxlen=args.maxlen,
        size_constraint=size_constraint,
        seed=args.seed,
    )
    print(f"{len(problems)} learning problems written to {args.out}")
    return 0


def cmd_evaluate(manager: ConfigManager, args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    lps = load_learning_problems(args.lps, kb)
    methods: list[Method] = args.methods
    learning = LearningService(config_manager=manager)
    drill = None
    if "drill" in methods:
        if args.model is None:
            raise ConfigurationError("method drill needs --model")
        drill = learning.load_drill_assets(
            kb, args.model, embeddings_path=args.embeddings, embedding_seed=args.embedding_seed
        )
    workers = args.workers if args.workers is not None else settings.workers
    rows = EvaluationService(learning_service=learning, workers=workers).evaluate(
        kb=kb,
        lps=lps,
        methods=methods,
        search_config=_search_config(manager, args),
        out=args.out,
        drill=drill,
    )
    print(format_aggregate_table(aggregate(rows)))
    return 0


def cmd_embed(manager: ConfigManager, args: argparse.Namespace) -> int:
    kb = load_kb(args.kb)
    table = TrainingService(config_manager=manager).embeddings(
        kb, dimension=args.dim, seed=args.seed, noise_scale=args.noise
    )
    save_embeddings(table, args.out)
    print(f"{len(kb.individuals)} embeddings of dimension {table.dimension} written to {args.out}")
    return 0


COMMANDS = {
    "learn": cmd_learn,
    "train": cmd_train,
    "generate-lps": cmd_generate_lps,
    "evaluate": cmd_evaluate,
    "embed": cmd_embed,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(level=args.log_level or settings.log_level)
    try:
        manager = ConfigManager(args.config or Path(settings.config_path))
        return COMMANDS[args.command](manager, args)
    except AlcLearnError as exc:
        logger.debug("Command failed | command=%s error=%s", args.command, type(exc).__name__)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    raise SystemExit(main())
