from pathlib import Path
import logging
import re

import matplotlib

matplotlib.use("Agg")  # headless safe
import matplotlib.pyplot as plt

logger = logging.getLogger(__name__)

# same input -> same bytes
plt.rcParams["svg.hashsalt"] = "chronolapse"
plt.rcParams["svg.fonttype"] = "none"


def safe_name(s: str) -> str:
    s = s.lower()
    s = re.sub(r"[^a-z0-9_]+", "_", s)
    return s.strip("_")


def save_fig(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    plt.savefig(path, format="svg", metadata={"Date": None})
    plt.close()
    logger.info("Saved: %s", path)
    return path
