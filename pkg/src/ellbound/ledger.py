"""ConstantsLedger: every unnamed positive constant used by the bound formulas.

A ledger is read from a TOML file of `name = positive number` lines.  Its
sha256 snapshot hash is attached to every bound output.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import DomainError, MissingKey, NonPositiveValue

LEDGER_ENV = "ELLBOUND_LEDGER"

# constants that a ledger file must state explicitly
NAMED_KEYS = (
    "gamma0", "gamma1", "gamma2",
    "kappa4",
    "kappa5", "kappa6", "kappa7",
    "alpha1", "alpha2",
    "c1_abc", "c2_abc",
)

# implicit constants of the "<<" estimates; default 1.0 when omitted
IMPLICIT_KEYS = (
    "ll_rank",          # r << d^3 log+ D_K
    "ll_reg_inv",       # log+ Reg^-1 << d^3 log+d log+D_K log+log D_K
    "ll_reg",           # Reg << e^(kappa5^d) D_K^(3/2)
    "ll_loglogV",       # log+ log V << kappa6^d log+D_K log+log D_K
    "ll_prod",          # prod max(1, h) << (d log+D_K)^(kappa7 d^3 log+D_K) ...
    "ll_abc_height",    # h(a:b:c) << h_x(Q)
    "ll_abc_degree",    # [L:Q] << [F:Q]
    "ll_abc_sigma",     # Sigma_S' << rad
    "ll_abc_disc",      # log D_L << rad + log D_F
)


@dataclass(frozen=True)
class ConstantsLedger:
    gamma0: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    kappa4: float = 0.1
    kappa5: float = 1.0
    kappa6: float = 1.0
    kappa7: float = 1.0
    alpha1: float = 1.0
    alpha2: float = 1.0
    c1_abc: float = 1.0
    c2_abc: float = 1.0
    ll_rank: float = 1.0
    ll_reg_inv: float = 1.0
    ll_reg: float = 1.0
    ll_loglogV: float = 1.0
    ll_prod: float = 1.0
    ll_abc_height: float = 1.0
    ll_abc_degree: float = 1.0
    ll_abc_sigma: float = 1.0
    ll_abc_disc: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise NonPositiveValue(f"{f.name} must be a number, got {v!r}")
            if not (v > 0 and math.isfinite(v)):
                raise NonPositiveValue(f"{f.name} must be a positive finite number, got {v!r}")
            object.__setattr__(self, f.name, float(v))
        if self.kappa4 > 1:
            raise DomainError("kappa4 must lie in (0, 1]")

    @classmethod
    def ones(cls) -> "ConstantsLedger":
        """Every constant equal to 1."""
        return cls(**{f.name: 1.0 for f in fields(cls)})

    @classmethod
    def from_mapping(cls, data: dict) -> "ConstantsLedger":
        for key in NAMED_KEYS:
            if key not in data:
                raise MissingKey(key)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise DomainError(f"unknown ledger keys: {', '.join(unknown)}")
        return cls(**data)

    def with_values(self, **changes) -> "ConstantsLedger":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def hash(self) -> str:
        """sha256 over the canonical JSON of all values."""
        blob = json.dumps({k: repr(v) for k, v in self.as_dict().items()}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_toml(self) -> str:
        return "".join(f"{k} = {v!r}\n" for k, v in self.as_dict().items())

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_toml())


def load_ledger(path=None) -> ConstantsLedger:
    """Read a TOML ledger; falls back to $ELLBOUND_LEDGER, then to the defaults."""
    if path is None:
        path = os.environ.get(LEDGER_ENV)
    if path is None:
        return ConstantsLedger()
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    return ConstantsLedger.from_mapping(data)
