from src.runner.config_parser import load_config, parse_config
from src.runner.schemas import RunSummary, ScenarioConfig
from src.runner.scenarios import RUNNERS, ScenarioResult, run_scenario

__all__ = [
    "RUNNERS",
    "RunSummary",
    "ScenarioConfig",
    "ScenarioResult",
    "load_config",
    "parse_config",
    "run_scenario",
]
