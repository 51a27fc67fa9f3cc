"""Reusable builders for tests - configs, sources and verdict lookups."""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from app.hdx.models import ExperimentConfig, TheoremVerdict


class ConfigFactory:
    """Experiment configs shared by the orchestrator and CLI tests."""

    @staticmethod
    def complete(n: int = 5, d: int = 2, checks: Iterable[Any] = ("adjointness",),
                 function: Optional[Dict[str, Any]] = None, **extra: Any) -> Dict[str, Any]:
        """Config document for a complete complex; checks may be ids or {"id", "params"} dicts."""
        data: Dict[str, Any] = {
            "complex": {"generator": "complete", "n": n, "d": d},
            "function": function or {"generator": "link-indicator", "face": [0], "level": d},
            "checks": [{"id": c} if isinstance(c, str) else c for c in checks],
        }
        data.update(extra)
        return data

    @staticmethod
    def build(data: Dict[str, Any], output_dir: Path) -> ExperimentConfig:
        return ExperimentConfig.model_validate({**data, "output_dir": str(output_dir)})

    @staticmethod
    def write(data: Dict[str, Any], path: Path) -> Path:
        path.write_text(json.dumps(data), encoding="utf-8")
        return path


def verdicts_named(verdicts: Iterable[TheoremVerdict], theorem: str) -> List[TheoremVerdict]:
    return [verdict for verdict in verdicts if verdict.theorem == theorem]
