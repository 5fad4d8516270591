"""Model spec strings such as ``gnp:n=100,d=3`` or ``noisytree:n=1000,delta=3,eps=1``."""
import re
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

from .errors import BadSpec
from .graph_core import Graph
from .random_models import (
    NoisyTreeParams,
    complete_graph,
    cycle,
    gnp,
    grid,
    noisy_tree,
    path,
    random_regular,
    random_tree,
    star,
)

SPEC_PATTERN = re.compile(r"^\s*(?P<model>[a-z]+)\s*(?::(?P<params>.*))?$")
PARAM_PATTERN = re.compile(r"^\s*(?P<key>[a-z]+)\s*=\s*(?P<value>[-+0-9.eE]+)\s*$")

# model -> (required keys, optional keys with defaults)
MODELS: Dict[str, Tuple[Tuple[str, ...], Dict[str, float]]] = {
    "gnp": (("n", "d"), {}),
    "regular": (("n", "d"), {}),
    "tree": (("n", "delta"), {}),
    "noisytree": (("n", "delta"), {"eps": 1.0}),
    "grid": (("side",), {}),
    "path": (("n",), {}),
    "cycle": (("n",), {}),
    "star": (("n",), {}),
    "complete": (("n",), {}),
}

INTEGER_KEYS = {"n", "delta", "side"}


@dataclass(frozen=True)
class ModelSpec:
    model: str
    params: Tuple[Tuple[str, float], ...]

    def __getitem__(self, key: str) -> float:
        return dict(self.params)[key]

    def integer(self, key: str) -> int:
        return int(self[key])

    def __str__(self) -> str:
        body = ",".join(f"{k}={_format_value(v)}" for k, v in self.params)
        return f"{self.model}:{body}" if body else self.model


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(value)


def parse_spec(text: str) -> ModelSpec:
    match = SPEC_PATTERN.match(text or "")
    if not match:
        raise BadSpec(f"cannot parse model spec {text!r}")
    model = match.group("model")
    if model not in MODELS:
        raise BadSpec(f"unknown model {model!r}; expected one of {', '.join(sorted(MODELS))}")
    required, optional = MODELS[model]
    params: Dict[str, float] = dict(optional)
    body = match.group("params") or ""
    for item in filter(None, (p.strip() for p in body.split(","))):
        param = PARAM_PATTERN.match(item)
        if not param:
            raise BadSpec(f"malformed parameter {item!r} in {text!r}")
        key = param.group("key")
        if key not in required and key not in optional:
            raise BadSpec(f"model {model!r} takes no parameter {key!r}")
        try:
            value = float(param.group("value"))
        except ValueError:
            raise BadSpec(f"parameter {key!r} is not a number: {param.group('value')!r}")
        if key in INTEGER_KEYS and not value.is_integer():
            raise BadSpec(f"parameter {key!r} must be an integer, got {param.group('value')}")
        if value < 0:
            raise BadSpec(f"parameter {key!r} must be non-negative, got {param.group('value')}")
        params[key] = value
    missing = [k for k in required if k not in params]
    if missing:
        raise BadSpec(f"model {model!r} is missing {', '.join(missing)}")
    ordered = tuple((k, params[k]) for k in required + tuple(optional))
    return ModelSpec(model, ordered)


def _gnp(spec: ModelSpec, seed: int) -> Graph:
    n = spec.integer("n")
    return gnp(n, min(spec["d"] / n, 1.0) if n else 0.0, seed)


def _regular(spec: ModelSpec, seed: int) -> Graph:
    if not spec["d"].is_integer():
        raise BadSpec(f"regular degree must be an integer, got {spec['d']}")
    return random_regular(spec.integer("n"), spec.integer("d"), seed)


def _noisytree(spec: ModelSpec, seed: int) -> Graph:
    base = random_tree(spec.integer("n"), spec.integer("delta"), seed, purpose="base")
    return noisy_tree(NoisyTreeParams(base, spec["eps"]), seed)


BUILDERS: Dict[str, Callable[[ModelSpec, int], Graph]] = {
    "gnp": _gnp,
    "regular": _regular,
    "tree": lambda spec, seed: random_tree(spec.integer("n"), spec.integer("delta"), seed),
    "noisytree": _noisytree,
    "grid": lambda spec, seed: grid(spec.integer("side")),
    "path": lambda spec, seed: path(spec.integer("n")),
    "cycle": lambda spec, seed: cycle(spec.integer("n")),
    "star": lambda spec, seed: star(spec.integer("n")),
    "complete": lambda spec, seed: complete_graph(spec.integer("n")),
}


def build_graph(spec: str, seed: int = 0) -> Graph:
    """Parse ``spec`` and draw the graph it names with ``seed``."""
    parsed = parse_spec(spec)
    return BUILDERS[parsed.model](parsed, seed)
