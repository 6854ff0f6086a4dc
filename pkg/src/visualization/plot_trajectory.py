from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

from src.visualization.utils import save_fig


def plot_series(df: pd.DataFrame, x: str, series: list[str], path: Path, title: str, ylabel: str = "") -> Path:
    """Line chart of one or more columns of df against column x, written as SVG."""
    plt.figure(figsize=(8, 4.5))
    for col in series:
        plt.plot(df[x], df[col], label=col)

    plt.title(title)
    plt.xlabel(x)
    plt.ylabel(ylabel)
    if len(series) > 1:
        plt.legend()
    plt.tight_layout()

    return save_fig(path)
