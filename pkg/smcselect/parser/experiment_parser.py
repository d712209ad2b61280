"""
YAML parser for experiment files.

Loads YAML files, applies ``key=value`` overrides and converts the result
into a validated ``ExperimentConfig``.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import yaml
from pydantic import ValidationError

from smcselect.model import ExperimentConfig

from .errors import ParseError

# Top-level keys that are sections rather than sampler ids.
_SECTIONS = {"problem", "output"}


def parse_override(text: str) -> Tuple[List[str], Any]:
    """Split ``a.b.c=value`` into a key path and a YAML-typed value."""
    if "=" not in text:
        raise ParseError(f"Override '{text}' is not of the form key=value")
    key, raw = text.split("=", 1)
    path = [part.strip() for part in key.strip().split(".") if part.strip()]
    if not path:
        raise ParseError(f"Override '{text}' has an empty key")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as e:
        raise ParseError(f"Override '{text}': cannot parse value: {e}")
    return path, value


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """
    Apply flat overrides such as ``smc.n=15000`` or ``budget=1e6``.

    The first key segment names a top-level field, a section (``problem``,
    ``output``), a sampler id or a sampler kind (``smc``, ``mcmc``); for
    sampler ids the remaining keys go into that sampler's parameter section,
    a kind prefix updates every sampler of that kind.
    """
    for text in overrides:
        path, value = parse_override(text)
        head = path[0]
        if len(path) == 1 or head in _SECTIONS:
            _set_path(data, path, value, text)
            continue
        samplers = _samplers(data)
        targets = [s for s in samplers if s.get("id") == head]
        if not targets:
            targets = [s for s in samplers if str(s.get("kind", "")).lower() == head]
        if not targets:
            _set_path(data, path, value, text)
            continue
        if path[1] in ("kind", "id"):
            raise ParseError(f"Override '{text}': sampler {path[1]} cannot be overridden")
        for sampler in targets:
            kind = str(sampler.get("kind", "")).lower()
            if not sampler.get(kind):
                sampler[kind] = {}
            _set_path(sampler[kind], path[1:], value, text)
    return data


def _samplers(data: Dict[str, Any]) -> List[Dict[str, Any]]:
    samplers = data.get("samplers") or []
    return [s for s in samplers if isinstance(s, dict)]


def _set_path(target: Dict[str, Any], path: List[str], value: Any, text: str) -> None:
    node = target
    for key in path[:-1]:
        child = node.get(key)
        if child is None:
            child = node[key] = {}
        if not isinstance(child, dict):
            raise ParseError(f"Override '{text}': '{key}' is not a section")
        node = child
    node[path[-1]] = value


class YamlExperimentParser:
    """
    Parser for experiment YAML files.

    Handles:
    - YAML syntax errors, reported with line numbers
    - ``--set`` style overrides applied before validation
    - csv paths resolved relative to the experiment file
    """

    def __init__(self) -> None:
        self._current_file: Optional[Path] = None

    def parse_file(
        self, file_path: Union[str, Path], overrides: Sequence[str] = ()
    ) -> ExperimentConfig:
        """
        Parse an experiment YAML file.

        Args:
            file_path: Path to the experiment YAML file
            overrides: ``key=value`` strings applied on top of the file

        Returns:
            ExperimentConfig: Validated experiment

        Raises:
            ParseError: If parsing or validation fails
        """
        file_path = Path(file_path).resolve()
        self._current_file = file_path

        if not file_path.exists():
            raise ParseError(f"File not found: {file_path}")

        try:
            with open(file_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            line = getattr(e, "problem_mark", None)
            line_num = line.line + 1 if line else None
            raise ParseError(f"YAML syntax error: {e}", file_path, line_num)

        if not isinstance(data, dict):
            raise ParseError("Root element must be a YAML object/dictionary", file_path)

        try:
            data = apply_overrides(data, overrides)
        except ParseError as e:
            raise ParseError(str(e), file_path)

        config = self.parse_dict(data, file_path)
        problem_path = config.problem.path
        if problem_path is not None and not Path(problem_path).is_absolute():
            config.problem.path = str((file_path.parent / problem_path).resolve())
        return config

    @staticmethod
    def parse_dict(
        data: Dict[str, Any], file_path: Optional[Union[str, Path]] = None
    ) -> ExperimentConfig:
        """Validate an already loaded mapping."""
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            # Convert Pydantic validation errors to ParseError
            errors = []
            for error in e.errors():
                loc = " -> ".join(str(x) for x in error["loc"])
                errors.append(f"{loc}: {error['msg']}")
            raise ParseError("Validation failed:\n  " + "\n  ".join(errors), file_path)
