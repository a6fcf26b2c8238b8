"""Commutative semirings shared by every trellis recursion.

A semiring bundles the two binary operations (written ``add`` and ``mul``)
together with their identities.  The same recursion code then computes
ordinary flows and moments (real semiring), numerically robust flows
(log-domain real semiring), Viterbi path metrics (tropical min-plus) or
reachability (boolean), depending only on which instance is passed in.

Carrier conventions of the bundled instances:

======== =============================== ===========================
id       carrier                         add / mul
======== =============================== ===========================
real     float                           ``+`` / ``*``
logreal  float, log-domain (``-inf``=0)  log-sum-exp / ``+``
tropical float (``+inf`` = zero)         ``min`` / ``+``
maxprod  nonnegative float               ``max`` / ``*``
boolean  bool                            ``or`` / ``and``
======== =============================== ===========================

Plain real numbers (e.g. labels parsed from a trellis file) are coerced
into a carrier through ``SemiringSpec.from_real``.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from .errors import SemiringError

# Largest moment order supported by the exact binomial-coefficient table.
MAX_ORDER = 64

# Pascal's triangle with exact integer entries, rows 0..MAX_ORDER.
_PASCAL: list[list[int]] = [[1]]
for _row in range(1, MAX_ORDER + 1):
    _prev = _PASCAL[-1]
    _PASCAL.append(
        [1] + [_prev[i - 1] + _prev[i] for i in range(1, _row)] + [1]
    )


def binomial(m: int, l: int) -> int:
    """Exact binomial coefficient C(m, l) for 0 <= l <= m <= MAX_ORDER."""
    if not 0 <= m <= MAX_ORDER:
        raise SemiringError(f"order {m} outside supported range 0..{MAX_ORDER}")
    if not 0 <= l <= m:
        raise SemiringError(f"binomial index {l} outside 0..{m}")
    return _PASCAL[m][l]


@dataclass(frozen=True)
class SemiringSpec:
    """One commutative semiring: (add, mul) with identities (zero, one).

    ``zero`` is the identity of ``add`` and annihilates under ``mul``;
    ``one`` is the identity of ``mul``.  ``from_real`` coerces a plain real
    number into the carrier and raises SemiringError when the value is not
    representable.  ``scale`` optionally short-cuts the n-fold add used for
    binomial-coefficient weighting (e.g. ``n * a`` for the real semiring,
    identity for idempotent adds).

    Instances are immutable values and safe to share between workers; all
    operations are pure functions of their arguments.
    """

    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    from_real: Callable[[float], Any] = field(default=float)
    scale: Optional[Callable[[int, Any], Any]] = None

    def __repr__(self) -> str:  # keeps JSON/debug output short
        return f"SemiringSpec({self.name!r})"


def nat_scale(semiring: SemiringSpec, n: int, a: Any) -> Any:
    """n-fold ``add`` of ``a`` with itself; ``zero`` when n == 0."""
    if n < 0:
        raise SemiringError(f"natural scaling needs n >= 0, got {n}")
    if semiring.scale is not None:
        return semiring.scale(n, a)
    result = semiring.zero
    addend = a
    while n:
        if n & 1:
            result = semiring.add(result, addend)
        n >>= 1
        if n:
            addend = semiring.add(addend, addend)
    return result


def power(semiring: SemiringSpec, a: Any, m: int) -> Any:
    """m-fold ``mul`` of ``a`` with itself; ``one`` when m == 0."""
    if m < 0:
        raise SemiringError(f"power needs m >= 0, got {m}")
    result = semiring.one
    factor = a
    while m:
        if m & 1:
            result = semiring.mul(result, factor)
        m >>= 1
        if m:
            factor = semiring.mul(factor, factor)
    return result


def semiring_binomial(semiring: SemiringSpec, a: Any, b: Any, m: int) -> Any:
    """Binomial expansion: add-sum over l of C(m,l) a^l mul b^(m-l).

    Equals ``power(add(a, b), m)`` in any commutative semiring; the
    expansion is computed literally so that the identity stays a testable
    property rather than a definition.
    """
    if m < 0:
        raise SemiringError(f"binomial expansion needs m >= 0, got {m}")
    total = semiring.zero
    for l in range(m + 1):
        term = semiring.mul(power(semiring, a, l), power(semiring, b, m - l))
        total = semiring.add(total, nat_scale(semiring, binomial(m, l), term))
    return total


def _logaddexp(x: float, y: float) -> float:
    if x == -math.inf:
        return y
    if y == -math.inf:
        return x
    hi, lo = (x, y) if x >= y else (y, x)
    return hi + math.log1p(math.exp(lo - hi))


def _log_from_real(x: float) -> float:
    x = float(x)
    if x < 0.0:
        raise SemiringError(
            f"log-domain semiring cannot represent negative value {x}"
        )
    return math.log(x) if x > 0.0 else -math.inf


def _maxprod_from_real(x: float) -> float:
    x = float(x)
    if x < 0.0:
        raise SemiringError(
            f"max-product semiring cannot represent negative value {x}"
        )
    return x


REAL = SemiringSpec(
    name="real",
    add=operator.add,
    mul=operator.mul,
    zero=0.0,
    one=1.0,
    from_real=float,
    scale=lambda n, a: float(n) * a,
)

LOGREAL = SemiringSpec(
    name="logreal",
    add=_logaddexp,
    mul=operator.add,
    zero=-math.inf,
    one=0.0,
    from_real=_log_from_real,
    scale=lambda n, a: -math.inf if n == 0 else math.log(n) + a,
)

TROPICAL = SemiringSpec(
    name="tropical",
    add=min,
    mul=operator.add,
    zero=math.inf,
    one=0.0,
    from_real=float,
    scale=lambda n, a: math.inf if n == 0 else a,
)

MAXPROD = SemiringSpec(
    name="maxprod",
    add=max,
    mul=operator.mul,
    zero=0.0,
    one=1.0,
    from_real=_maxprod_from_real,
    scale=lambda n, a: 0.0 if n == 0 else a,
)

BOOLEAN = SemiringSpec(
    name="boolean",
    add=operator.or_,
    mul=operator.and_,
    zero=False,
    one=True,
    from_real=lambda x: bool(x),
    scale=lambda n, a: False if n == 0 else a,
)

_REGISTRY = {s.name: s for s in (REAL, LOGREAL, TROPICAL, MAXPROD, BOOLEAN)}

SEMIRING_IDS = tuple(sorted(_REGISTRY))


def get_semiring(name: str) -> SemiringSpec:
    """Look up a bundled semiring by its string id."""
    try:
        return _REGISTRY[name]
    except KeyError:
        raise SemiringError(
            f"unknown semiring {name!r}; available: {', '.join(SEMIRING_IDS)}"
        ) from None
