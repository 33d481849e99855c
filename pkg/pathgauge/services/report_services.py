import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from pathgauge import __version__
from pathgauge.services.network_io_services import file_digest


def _plain(value: Any) -> Any:
    """numpy scalars and arrays, tuples and nested containers as YAML-safe data."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


@dataclass
class RunReport:
    command: List[str]
    digests: Dict[str, str] = field(default_factory=dict)
    version: str = __version__
    results: Dict[str, Any] = field(default_factory=dict)
    wall_time: Optional[float] = None
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def add_input(self, label: str, path) -> None:
        self.digests[label] = "sha256:" + file_digest(path)

    def finish(self) -> "RunReport":
        self.wall_time = round(time.perf_counter() - self._started, 6)
        return self

    def as_dict(self) -> Dict[str, Any]:
        return {
            "command": list(self.command),
            "version": self.version,
            "inputs": dict(self.digests),
            "results": _plain(self.results),
            # only nondeterministic field, kept last
            "wall_time": self.wall_time,
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.as_dict(), sort_keys=False)

