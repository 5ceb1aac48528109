"""Tower numbers: reals stored as v, exp(v) or exp(exp(v)).

Level 0 holds any real float.  Levels 1 and 2 hold positive numbers whose
logarithm (resp. double logarithm) is the stored float.  Arithmetic works in
log space so that bounds such as exp(exp(40)) never overflow.

Addition absorbs the smaller summand once its ratio to the larger one
underflows in double precision (a log gap beyond about 745 nats).
"""
from __future__ import annotations

import math
from functools import total_ordering

from .errors import DomainError, LevelOverflow

MAX_LEVEL = 2
# exp(v) is a finite double for v below this
EXP_LIMIT = 709.0


def _exp_k(v: float, k: int) -> float:
    for _ in range(k):
        if v > 709.78:
            return math.inf
        v = math.exp(v)
    return v


@total_ordering
class TowerReal:
    """A real number represented as exp^level(value)."""

    __slots__ = ("level", "value")

    def __init__(self, value: float, level: int = 0):
        level = int(level)
        if level < 0:
            raise DomainError("level must be nonnegative")
        if level > MAX_LEVEL:
            raise LevelOverflow(f"level {level} exceeds {MAX_LEVEL}")
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            raise DomainError(f"non-finite tower value {value}")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "value", value)

    def __setattr__(self, *_):
        raise AttributeError("TowerReal is immutable")

    def __reduce__(self):
        return (TowerReal, (self.value, self.level))

    @classmethod
    def coerce(cls, x) -> "TowerReal":
        if isinstance(x, TowerReal):
            return x
        return cls(float(x), 0)

    @classmethod
    def from_log(cls, log_x) -> "TowerReal":
        """exp(log_x), where log_x is a float or a TowerReal."""
        return cls.coerce(log_x).exp()

    # ------------------------------------------------------------------
    # representation
    # ------------------------------------------------------------------

    def is_positive(self) -> bool:
        return self.level > 0 or self.value > 0

    def normalized(self) -> "TowerReal":
        """Lowest level at which the value is still a finite double."""
        level, v = self.level, self.value
        while level > 0 and v <= EXP_LIMIT:
            v = math.exp(v)
            level -= 1
        return TowerReal(v, level)

    def _raised(self, k: int):
        """Float w with self = exp^k(w), or None when self is too small for level k."""
        level, v = self.level, self.value
        while level < k:
            if v <= 0:
                return None
            v = math.log(v)
            level += 1
        return v

    def __float__(self):
        return _exp_k(self.value, self.level)

    def log_float(self) -> float:
        """Natural log as a double (inf when it does not fit)."""
        if self.level == 0:
            if self.value <= 0:
                raise DomainError("log of a nonpositive number")
            return math.log(self.value)
        return _exp_k(self.value, self.level - 1)

    # ------------------------------------------------------------------
    # exp / log
    # ------------------------------------------------------------------

    def exp(self) -> "TowerReal":
        if self.level == MAX_LEVEL:
            n = self.normalized()
            if n.level == MAX_LEVEL:
                raise LevelOverflow("exp of a level-2 number needs level 3")
            return TowerReal(n.value, n.level + 1)
        return TowerReal(self.value, self.level + 1)

    def log(self) -> "TowerReal":
        if self.level == 0:
            if self.value <= 0:
                raise DomainError("log requires a positive number")
            return TowerReal(math.log(self.value), 0)
        return TowerReal(self.value, self.level - 1)

    # ------------------------------------------------------------------
    # ordering
    # ------------------------------------------------------------------

    def compare(self, other) -> int:
        other = TowerReal.coerce(other)
        # compare at the higher level: log is monotone, so raising never reverses an order,
        # while demoting through exp could round distinct values together
        k = max(self.level, other.level)
        vx, vy = self._raised(k), other._raised(k)
        if vx is None:
            return -1
        if vy is None:
            return 1
        return (vx > vy) - (vx < vy)

    def __eq__(self, other):
        if not isinstance(other, (TowerReal, int, float)):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other):
        if not isinstance(other, (TowerReal, int, float)):
            return NotImplemented
        return self.compare(other) < 0

    def __hash__(self):
        n = self.normalized()
        return hash((n.level, n.value))

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (TowerReal, int, float)):
            return NotImplemented
        x, y = self.normalized(), TowerReal.coerce(other).normalized()
        if x.level == 0 and y.level == 0:
            s = x.value + y.value
            if math.isfinite(s):
                return TowerReal(s)
        # a is the summand of larger magnitude; it is positive here
        if x.level == 0 and y.level == 0:
            a, b = (x, y) if x.value >= y.value else (y, x)
        elif x.level >= 1 and (y.level == 0 or x >= y):
            a, b = x, y
        else:
            a, b = y, x
        if b.level >= 1 and not a.is_positive():
            raise DomainError("invalid tower sum")
        la = a.log().normalized()
        if la.level >= 1:
            return a
        lav = la.value
        if b.level == 0:
            if b.value == 0:
                return a
            sign = 1.0 if b.value > 0 else -1.0
            gap = math.log(abs(b.value)) - lav
            ratio = sign * math.exp(gap) if gap > -745 else 0.0
        else:
            gap = b.log().normalized().value - lav
            ratio = math.exp(gap) if gap > -745 else 0.0
        if ratio <= -1.0:
            return TowerReal(math.exp(lav) + b.value)
        return TowerReal(lav + math.log1p(ratio)).exp().normalized()

    __radd__ = __add__

    def __neg__(self):
        if self.level:
            raise DomainError("negation of a level >= 1 tower number")
        return TowerReal(-self.value)

    def __sub__(self, other):
        other = TowerReal.coerce(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, (TowerReal, int, float)):
            return NotImplemented
        x, y = self.normalized(), TowerReal.coerce(other).normalized()
        if x.level == 0 and y.level == 0:
            p = x.value * y.value
            if math.isfinite(p):
                return TowerReal(p)
        if (x.level == 0 and x.value == 0) or (y.level == 0 and y.value == 0):
            return TowerReal(0.0)
        if not (x.is_positive() and y.is_positive()):
            raise DomainError("tower product of a negative and a huge number")
        return (x.log() + y.log()).exp().normalized()

    __rmul__ = __mul__

    def __pow__(self, k):
        k = float(k)
        if k == 0:
            return TowerReal(1.0)
        if not self.is_positive():
            raise DomainError("power of a nonpositive tower number")
        if k < 0:
            return (self.log() * TowerReal(k)).exp().normalized()
        return (self.log() * k).exp().normalized()

    # ------------------------------------------------------------------
    # output
    # ------------------------------------------------------------------

    def to_json(self) -> dict:
        """{"level", "log_value"}: the number is exp applied `level` times to log_value."""
        return {"level": self.level, "log_value": self.value}

    def __repr__(self):
        return f"TowerReal(level={self.level}, value={self.value!r})"

    def __str__(self):
        if self.level == 0:
            return repr(self.value)
        return "exp(" * self.level + repr(self.value) + ")" * self.level


def compare(x, y) -> int:
    """-1, 0 or 1 as x <, =, > y."""
    return TowerReal.coerce(x).compare(y)


def tower_exp(x) -> TowerReal:
    return TowerReal.coerce(x).exp()


def tower_log(x) -> TowerReal:
    return TowerReal.coerce(x).log()
