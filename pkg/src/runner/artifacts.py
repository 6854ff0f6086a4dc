import logging
from pathlib import Path

import pandas as pd

from src import config
from src.runner.schemas import RunSummary

logger = logging.getLogger(__name__)


def resolve(path: Path | None, out_dir: Path, default: str | None) -> Path | None:
    """Relative output paths land under out_dir; absolute ones are kept."""
    if path is None:
        if default is None:
            return None
        path = Path(default)
    path = Path(path)
    return path if path.is_absolute() else out_dir / path


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.info("Saved: %s", path)
    return path


def write_summary(summary: RunSummary, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(summary.to_text(), encoding="utf-8")
    logger.info("Saved: %s", path)
    return path
