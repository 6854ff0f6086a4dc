from src.wavepacket.spreading import (
    GaussianPacket,
    density_averaged,
    density_conventional,
    large_time_parameter,
    matched_time,
    peak_bound,
    spreading_ratio,
)

__all__ = [
    "GaussianPacket",
    "density_conventional",
    "density_averaged",
    "peak_bound",
    "spreading_ratio",
    "matched_time",
    "large_time_parameter",
]
