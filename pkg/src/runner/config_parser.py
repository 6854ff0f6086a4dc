"""
config_parser.py

Reads the line-oriented scenario format:

    # comment
    [section]
    key = value

Keys are case-sensitive. Every problem found (unknown section or key,
duplicate, missing required key, bad value) is collected with its line
number and raised together as a ConfigError.
"""

import difflib
import logging
from pathlib import Path

from pydantic import ValidationError

from src.errors import ConfigError, ConfigIssue
from src.runner.schemas import ScenarioConfig

logger = logging.getLogger(__name__)

PATH_KEYS = {("model", "tabulated_file"), ("system", "hamiltonian_file")}


def _section_fields() -> dict[str, list[str]]:
    fields = {}
    for name, info in ScenarioConfig.model_fields.items():
        section_model = info.annotation
        # unwrap Optional[...]
        args = getattr(section_model, "__args__", None)
        if args:
            section_model = next(a for a in args if a is not type(None))
        fields[name] = list(section_model.model_fields)
    return fields


def _suggest(word: str, options: list[str]) -> str:
    match = difflib.get_close_matches(word, options, n=1)
    return f"; did you mean '{match[0]}'?" if match else ""


def _tokenize(text: str, issues: list[ConfigIssue]):
    """Split text into {section: {key: value}} and remember the line of every entry."""
    sections_fields = _section_fields()
    raw: dict[str, dict[str, str]] = {}
    lines: dict[tuple[str, ...], int] = {}
    section = None
    skipping = False

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue

        if line.startswith("["):
            name = line.strip("[]").strip()
            skipping = True
            if not line.endswith("]") or not name:
                issues.append(ConfigIssue(lineno, f"malformed section header {line!r}"))
                section = None
            elif name not in sections_fields:
                issues.append(ConfigIssue(lineno, f"unknown section [{name}]{_suggest(name, list(sections_fields))}"))
                section = None
            elif name in raw:
                issues.append(ConfigIssue(lineno, f"duplicate section [{name}]"))
                section = None
            else:
                section, skipping = name, False
                raw[section] = {}
                lines[(section,)] = lineno
            continue

        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            issues.append(ConfigIssue(lineno, f"expected 'key = value', got {line!r}"))
            continue
        if section is None:
            # keys under a rejected header were already reported with it
            if not skipping:
                issues.append(ConfigIssue(lineno, f"key '{key}' outside a valid section"))
            continue
        if key not in sections_fields[section]:
            issues.append(
                ConfigIssue(lineno, f"unknown key '{key}' in [{section}]{_suggest(key, sections_fields[section])}")
            )
            continue
        if key in raw[section]:
            issues.append(ConfigIssue(lineno, f"duplicate key '{key}' in [{section}]"))
            continue
        raw[section][key] = value
        lines[(section, key)] = lineno

    return raw, lines


def _line_for(loc: tuple, lines: dict) -> int | None:
    loc = tuple(str(part) for part in loc)
    for depth in range(min(len(loc), 2), 0, -1):
        if loc[:depth] in lines:
            return lines[loc[:depth]]
    return None


def _describe(err: dict) -> str:
    loc = [str(part) for part in err["loc"]]
    if err["type"] == "missing":
        if len(loc) == 1:
            return f"missing required section [{loc[0]}]"
        return f"missing required key '{loc[1]}' in [{loc[0]}]"
    msg = err["msg"].removeprefix("Value error, ")
    if len(loc) >= 2:
        return f"[{loc[0]}] {loc[1]}: {msg}"
    if len(loc) == 1:
        return f"[{loc[0]}]: {msg}"
    return msg


def parse_config(text: str, base_dir: Path | None = None) -> ScenarioConfig:
    """Parse and validate a scenario; relative file paths resolve against base_dir."""
    issues: list[ConfigIssue] = []
    raw, lines = _tokenize(text, issues)

    if base_dir is not None:
        for section, key in PATH_KEYS:
            value = raw.get(section, {}).get(key)
            if value and not Path(value).is_absolute():
                raw[section][key] = str(Path(base_dir) / value)

    try:
        cfg = ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        for err in exc.errors():
            issues.append(ConfigIssue(_line_for(err["loc"], lines), _describe(err)))
        cfg = None

    if issues:
        issues.sort(key=lambda i: (i.line is None, i.line or 0))
        raise ConfigError(issues)
    logger.debug("parsed scenario %s (%s)", cfg.scenario.name, cfg.scenario.kind)
    return cfg


def load_config(path: Path) -> tuple[ScenarioConfig, str]:
    """Read a scenario file; returns the config and the raw text (used for hashing)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([ConfigIssue(None, f"cannot read {path}: {exc.strerror}")]) from exc
    return parse_config(text, base_dir=path.parent), text
