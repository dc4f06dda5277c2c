#!/usr/bin/env python3
"""Run every experiment config under data/configs (or the ones given)."""
import sys
from pathlib import Path
from typing import List

from adlab import CONFIGS_DIR
from adlab.cli import EXIT_OK, main as adlab_main
from adlab.logger import logger


def main(paths: List[str]) -> int:
    configs = paths or sorted(str(p) for p in Path(CONFIGS_DIR).glob("*.json"))
    if not configs:
        logger.error(f"❌ No configs found in {CONFIGS_DIR}")
        return 2
    failed = 0
    for config in configs:
        logger.info(f"🔄 Processing config: {config}")
        if adlab_main(["run", "--config", config]) != EXIT_OK:
            failed += 1
    logger.info("📊 ===== Experiment Summary =====")
    logger.info(f"📈 Total configs processed: {len(configs)}")
    logger.info(f"❌ Failed configs: {failed}")
    return 3 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
