"""
src/runner/run_all.py

Runs every scenario file in scenarios/ and writes the artifacts into reports/.
Continues when one scenario fails; the exit code reports whether all passed.
"""

import logging
import sys
from pathlib import Path

from src import config
from src.errors import ChronolapseError
from src.runner.config_parser import load_config
from src.runner.scenarios import run_scenario

logger = logging.getLogger(__name__)


def run_directory(scenario_dir: Path = config.SCENARIO_DIR, out_dir: Path = config.OUT_DIR):
    """Returns (passed, failed) where failed lists (file, reason)."""
    files = sorted(Path(scenario_dir).glob("*.cfg"))
    passed, failed = 0, []

    for path in files:
        print("\n==============================")
        print("RUN:", path.name)
        print("==============================")
        try:
            cfg, text = load_config(path)
            summary, _ = run_scenario(cfg, out_dir, text)
        except Exception as e:  # noqa: BLE001
            if not isinstance(e, ChronolapseError):
                logger.exception("unexpected failure in %s", path.name)
            failed.append((path.name, f"{type(e).__name__}: {e}"))
            print(f"⚠️ Failed: {path.name} ({type(e).__name__}) — continuing...")
            continue

        if summary.passed:
            passed += 1
        else:
            bad = [name for name, ok in summary.verdicts.items() if not ok]
            failed.append((path.name, "verdict failed: " + ", ".join(bad)))
            print(f"⚠️ Verdict failed: {path.name} ({', '.join(bad)})")

    print("\n✅ Reports folder:", Path(out_dir).resolve())
    print(f"✅ Success: {passed}/{len(files)}")
    if failed:
        print("⚠️ Failed scenarios:")
        for name, reason in failed:
            print(f" - {name}: {reason}")
    return passed, failed


def main():
    logging.basicConfig(level=config.LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")
    _, failed = run_directory()
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
