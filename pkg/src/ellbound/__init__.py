"""Exact heights, places and explicit bounds for S-integral points and abc triples."""
from __future__ import annotations

from importlib.resources import files as _files

from .errors import BudgetError, DomainError, EllboundError
from .exactnum import QQ, AlgebraicNumber, NumberField
from .ledger import ConstantsLedger, load_ledger
from .tower import TowerReal

__version__ = "0.1.0"


def shipped_ledger(name: str = "ones") -> str:
    """Path of a ledger file bundled with the package ("ones" or "default")."""
    return str(_files(__name__) / "data" / f"{name}.toml")


__all__ = [
    "QQ", "AlgebraicNumber", "NumberField", "ConstantsLedger", "load_ledger", "TowerReal",
    "EllboundError", "DomainError", "BudgetError", "shipped_ledger", "__version__",
]
