"""
sampling.py

Counter-based, block-parallel sampling of microscopic times.

Sample j belongs to block j // SAMPLE_BLOCK_SIZE. Each block draws from its own
Philox stream keyed by SeedSequence(seed, spawn_key=(block,)), so a sample set
depends only on (seed, n_samples, model, t), never on how many workers ran.
Block results are always returned and reduced in block order.
"""

import logging
from typing import Callable, TypeVar

import numpy as np
from joblib import Parallel, delayed

from src import config
from src.timing.time_models import SamplerConfig, TimeModel, check_tick_range, draw_theta_block

logger = logging.getLogger(__name__)

T = TypeVar("T")


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def block_sizes(n_samples: int) -> list[int]:
    full, rest = divmod(n_samples, config.SAMPLE_BLOCK_SIZE)
    return [config.SAMPLE_BLOCK_SIZE] * full + ([rest] if rest else [])


def map_blocks(work: Callable[[np.random.Generator, int], T], cfg: SamplerConfig) -> list[T]:
    """Run work(rng, size) once per block and return the results in block order."""
    sizes = block_sizes(cfg.n_samples)
    if cfg.n_jobs == 1 or len(sizes) == 1:
        return [work(block_rng(cfg.seed, b), size) for b, size in enumerate(sizes)]
    return Parallel(n_jobs=cfg.n_jobs)(
        delayed(work)(block_rng(cfg.seed, b), size) for b, size in enumerate(sizes)
    )


def sample_theta(model: TimeModel, t: float, cfg: SamplerConfig) -> np.ndarray:
    """Draw cfg.n_samples microscopic times at macroscopic time t; all values are >= 0."""
    check_tick_range(model, t)

    def work(rng, size):
        return draw_theta_block(model, t, rng, size)

    theta = np.concatenate(map_blocks(work, cfg))
    logger.debug("sampled %d theta values (family=%s, t=%g)", theta.size, model.family, t)
    return theta
