"""Command-line entry point: `adlab run` and `adlab validate`."""
import argparse
import sys
from typing import List, Optional

from adlab import __version__
from adlab.exceptions import ConfigInvalid, TaskFailed
from adlab.logger import logger
from adlab.pipeline.runner import PipelineRunner, build_model
from adlab.schema import load_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TASK = 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adlab", description="Adiabatic-evolution experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the tasks of an experiment config")
    run.add_argument("--config", required=True, help="Path to a JSON experiment config")
    run.add_argument("--out", help="Output directory (overrides output.directory)")
    run.add_argument("--format", choices=("csv", "json"), help="Table format (overrides output.format)")
    run.add_argument("--workers", type=int, default=4, help="Concurrent sweep points")

    validate = commands.add_parser("validate", help="Check a config without running it")
    validate.add_argument("--config", required=True, help="Path to a JSON experiment config")
    return parser


def cmd_validate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    points = [c for _, c in config.sweep_points()] if config.sweep else [config]
    for point in points:
        build_model(point)
    logger.info(f"✅ {args.config} is valid: tasks {', '.join(config.ordered_tasks())}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    output = config.output.model_copy(update={
        k: v for k, v in (("directory", args.out), ("format", args.format)) if v
    })
    config = config.model_copy(update={"output": output})

    logger.info(f"🚀 Running {args.config} into {config.output.directory}")
    runner = PipelineRunner(config, max_workers=args.workers)
    manifests, stats = runner.run()
    if stats["failed"]:
        for failure in runner.failures:
            logger.error(f"❌ {failure}")
        return EXIT_TASK
    logger.info(f"🏁 Wrote {sum(len(files) for m in manifests for files in m.outputs.values())} files")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    handlers = {"run": cmd_run, "validate": cmd_validate}
    try:
        return handlers[args.command](args)
    except ConfigInvalid as e:
        logger.error(f"❌ {e}")
        return EXIT_CONFIG
    except TaskFailed as e:
        logger.error(f"❌ {e}")
        return EXIT_TASK


if __name__ == "__main__":
    sys.exit(main())
