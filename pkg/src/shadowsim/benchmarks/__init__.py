"""Committed benchmark scenarios shipped with the package."""

from importlib.resources import files
from pathlib import Path

from ..errors import ScenarioError
from ..scenario import Scenario, load_scenario


def benchmark_path(name: str) -> Path:
    """Filesystem path of a named benchmark scenario."""
    p = Path(str(files(__package__).joinpath(f"{name}.json")))
    if not p.is_file():
        raise ScenarioError(f"unknown benchmark {name!r}; available: {', '.join(list_benchmarks())}")
    return p


def list_benchmarks() -> list[str]:
    root = Path(str(files(__package__)))
    return sorted(p.stem for p in root.glob("*.json") if not p.stem.endswith("_field"))


def load_benchmark(name: str) -> Scenario:
    return load_scenario(benchmark_path(name))
