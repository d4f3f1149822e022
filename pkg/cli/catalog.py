"""Built-in problems, stored as run documents under ``catalog/``."""

from pathlib import Path
from typing import List

from common.errors import ConfigError

CATALOG_DIR = Path(__file__).resolve().parent / "catalog"


def problem_names() -> List[str]:
    return sorted(path.stem for path in CATALOG_DIR.glob("*.json"))


def load_problem(name: str) -> str:
    """
    Text of the run document for a built-in problem.

    Raises:
        ConfigError: If no problem has that name.
    """
    if name not in problem_names():
        raise ConfigError(f"unknown problem {name!r}; choose from {', '.join(problem_names())}", "--problem")
    path = CATALOG_DIR / f"{name}.json"
    return path.read_text(encoding="utf-8")
