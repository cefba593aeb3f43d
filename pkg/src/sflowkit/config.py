"""Problem configuration: JSON loading, schema validation, defaults."""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import jsonschema

from . import expr as ex
from .coefficients import CoefficientPath
from .errors import ConfigError, SflowError
from .numerics import Numerics
from .spectrum import DomainSpec


@lru_cache(maxsize=None)
def load_schema(name):
    text = resources.files("sflowkit").joinpath("schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc, name):
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as err:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"{name} schema violation at {where}: {err.message}") from None


@dataclass
class ProblemConfig:
    domain: DomainSpec
    path: CoefficientPath
    G: str | None = None
    numerics: Numerics = field(default_factory=Numerics)
    name: str = ""
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def lambda_range(self):
        return self.path.lambda_range


def from_dict(doc, force_x_dependent=False):
    validate(doc, "config")
    d = doc["domain"]
    try:
        if d["type"] == "interval":
            domain = DomainSpec.interval(d.get("length", math.pi))
        else:
            domain = DomainSpec.rectangle(*d.get("sides", (1.0, 1.0)))
    except ValueError as err:
        raise ConfigError(str(err)) from None
    co = doc["coefficients"]
    lam_range = tuple(doc.get("lambda_range", (0.0, 1.0)))
    try:
        path = CoefficientPath.from_strings(co["a"], co["b"], co["c"], lam_range, force_x_dependent)
    except (SflowError, ValueError) as err:
        raise ConfigError(f"coefficients: {err}") from None
    G = (doc.get("nonlinearity") or {}).get("G")
    if G is not None:
        try:
            ex.parse(G, variables=ex.NONLINEARITY_VARS)
        except SflowError as err:
            raise ConfigError(f"nonlinearity: {err}") from None
    numerics = Numerics.from_dict(doc.get("numerics"))
    return ProblemConfig(domain, path, G, numerics, doc.get("name", ""), doc)


def load(path, force_x_dependent=False):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON ({err})") from None
    except OSError as err:
        raise ConfigError(f"{path}: {err.strerror}") from None
    return from_dict(doc, force_x_dependent)


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_atomic(path, text):
    """Write text to path via a temporary file in the same directory and a rename."""
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
