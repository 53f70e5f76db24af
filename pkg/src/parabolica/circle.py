"""Marked finite sets on coordinate circles and their equivalence.

A marked set is a finite subset of R/Z together with a proper partition:
every block has one or two points and no two 2-blocks interleave on the
circle (their chords do not cross).  A pair of marked sets, one per
coordinate circle, carries a table of pairwise fractional differences; the
pair is non-synchronized when all table entries are distinct, and two pairs
are equivalent when some circle shift makes their difference tables ordered
identically.

Coordinates are either exact (``fractions.Fraction``, used when every input
is an int, Fraction, or a ``"p/q"`` string) or 64-bit floats with a
distinctness tolerance.  The non-synchronization predicate is discontinuous,
so exact mode is preferred for fixtures and combinatorial tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    ClassTooLarge,
    DuplicatePoint,
    Intermingled,
    InvalidPartition,
    SizeMismatch,
    SynchronizedInput,
)

Coord = Union[Fraction, float]


def _coerce(value) -> Coord:
    """Accept Fraction/int/"p/q" as exact coordinates, floats as floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a circle coordinate")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise TypeError(f"cannot interpret {value!r} as a circle coordinate")


def wrap(value: Coord) -> Coord:
    """Reduce a coordinate to [0, 1) on R/Z, preserving exactness."""
    if isinstance(value, Fraction):
        return value - (value // 1)
    v = value % 1.0
    return 0.0 if v == 1.0 else v


def circle_distance(a: Coord, b: Coord) -> Coord:
    """Geodesic distance on R/Z."""
    d = wrap(a - b)
    alt = 1 - d
    return d if d <= alt else alt


@dataclass(frozen=True)
class CirclePoint:
    """A coordinate on R/Z, normalized to [0, 1)."""

    value: Coord

    @staticmethod
    def of(value) -> "CirclePoint":
        return CirclePoint(wrap(_coerce(value)))

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class MarkedSet:
    """Sorted points on a circle with a proper partition into 1/2-blocks.

    ``classes`` uses 1-based indices into ``points`` and is stored
    canonically: indices sorted within each block, blocks sorted by their
    first index.  Construct through :func:`validate_marked_set`.
    """

    points: tuple[CirclePoint, ...]
    classes: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def values(self) -> tuple[Coord, ...]:
        return tuple(p.value for p in self.points)

    @property
    def exact(self) -> bool:
        return all(p.exact for p in self.points)

    def two_blocks(self) -> list[tuple[int, int]]:
        return [tuple(b) for b in self.classes if len(b) == 2]


@dataclass(frozen=True)
class CharacteristicPair:
    """Marked sets on the two coordinate circles; either side may be empty."""

    plus: MarkedSet
    minus: MarkedSet


@dataclass(frozen=True)
class DifferenceTable:
    """Fractional differences tau[k,m] = {plus_k - minus_m}, 1-based keys.

    ``min_gap`` is the smallest circle distance between two distinct cells
    (``inf`` when the table has fewer than two cells); ``witness`` is the
    lexicographically first cell pair attaining it.
    """

    entries: dict[tuple[int, int], Coord] = field(default_factory=dict)
    min_gap: Coord = float("inf")
    witness: Optional[tuple[tuple[int, int], tuple[int, int]]] = None

    def flat(self) -> list[Coord]:
        """Values in row-major (k, m) order."""
        return [self.entries[key] for key in sorted(self.entries)]


def _nesting_ok(positions: Sequence[int], blocks: Sequence[tuple[int, int]], n: int) -> bool:
    """Stack test: chords over circular positions 0..n-1 are non-crossing."""
    open_at = {}
    close_at = {}
    for bid, (i, j) in enumerate(blocks):
        lo, hi = (i, j) if i < j else (j, i)
        open_at[lo] = bid
        close_at[hi] = bid
    stack: list[int] = []
    for pos in range(n):
        if pos in open_at and pos in close_at:
            return False  # degenerate chord
        if pos in open_at:
            stack.append(open_at[pos])
        elif pos in close_at:
            if not stack or stack[-1] != close_at[pos]:
                return False
            stack.pop()
    return not stack


def validate_marked_set(points, classes, tolerance: float = 1e-12) -> MarkedSet:
    """Normalize, sort and check a marked set.

    ``points`` are circle coordinates (numbers or "p/q" strings);
    ``classes`` is a partition of the 1-based point indices into blocks of
    size one or two.  Raises ``DuplicatePoint``, ``InvalidPartition``,
    ``ClassTooLarge`` or ``Intermingled``.
    """
    coords = [wrap(_coerce(p)) for p in points]
    n = len(coords)

    seen: set[int] = set()
    norm_blocks: list[tuple[int, ...]] = []
    for block in classes:
        bl = tuple(sorted(int(i) for i in block))
        if len(bl) == 0:
            raise InvalidPartition("empty class")
        if len(bl) > 2:
            raise ClassTooLarge(f"class {bl} has {len(bl)} points")
        for i in bl:
            if not 1 <= i <= n:
                raise InvalidPartition(f"index {i} out of range 1..{n}")
            if i in seen:
                raise InvalidPartition(f"index {i} appears in two classes")
            seen.add(i)
        norm_blocks.append(bl)
    if len(seen) != n:
        missing = sorted(set(range(1, n + 1)) - seen)
        raise InvalidPartition(f"indices {missing} not covered by any class")

    order = sorted(range(n), key=lambda i: coords[i])
    sorted_coords = [coords[i] for i in order]
    for i in range(n):
        j = (i + 1) % n
        if n > 1:
            d = circle_distance(sorted_coords[i], sorted_coords[j])
            if (d == 0) if isinstance(d, Fraction) else (d <= tolerance):
                raise DuplicatePoint(
                    f"points {sorted_coords[i]} and {sorted_coords[j]} coincide on R/Z"
                )

    # Remap class indices to the sorted order (still 1-based).
    new_index = {old + 1: new + 1 for new, old in enumerate(order)}
    remapped = sorted(
        (tuple(sorted(new_index[i] for i in bl)) for bl in norm_blocks),
        key=lambda b: b[0],
    )

    twos = [(b[0] - 1, b[1] - 1) for b in remapped if len(b) == 2]
    if not _nesting_ok(list(range(n)), twos, n):
        raise Intermingled("two 2-classes interleave on the circle")

    return MarkedSet(
        points=tuple(CirclePoint(c) for c in sorted_coords),
        classes=tuple(remapped),
    )


def shift_set(ms: MarkedSet, alpha) -> MarkedSet:
    """Translate every point by alpha on R/Z, preserving classes."""
    a = _coerce(alpha)
    shifted = [wrap(p.value + a) for p in ms.points]
    n = len(shifted)
    order = sorted(range(n), key=lambda i: shifted[i])
    new_index = {old + 1: new + 1 for new, old in enumerate(order)}
    classes = sorted(
        (tuple(sorted(new_index[i] for i in bl)) for bl in ms.classes),
        key=lambda b: b[0] if b else 0,
    )
    return MarkedSet(
        points=tuple(CirclePoint(shifted[i]) for i in order),
        classes=tuple(classes),
    )


def difference_table(pair: CharacteristicPair) -> DifferenceTable:
    """Full K x M table of fractional differences of the pair."""
    plus = pair.plus.values
    minus = pair.minus.values
    entries: dict[tuple[int, int], Coord] = {}
    for k, a in enumerate(plus, start=1):
        for m, b in enumerate(minus, start=1):
            entries[(k, m)] = wrap(a - b)
    keys = sorted(entries)
    min_gap: Coord = float("inf")
    witness = None
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            d = circle_distance(entries[keys[i]], entries[keys[j]])
            if d < min_gap:
                min_gap = d
                witness = (keys[i], keys[j])
    return DifferenceTable(entries=entries, min_gap=min_gap, witness=witness)


@dataclass(frozen=True)
class SyncDecision:
    non_synchronized: bool
    min_gap: Coord
    witness: Optional[tuple[tuple[int, int], tuple[int, int]]]


def is_non_synchronized(pair: CharacteristicPair, tolerance: float = 0.0) -> SyncDecision:
    """Decide non-synchronization: all difference-table entries distinct.

    With tolerance 0 this is the exact condition that no circle shift maps
    two or more plus-points onto minus-points simultaneously.  When the
    decision is negative the witness names the colliding cells.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    table = difference_table(pair)
    if table.min_gap == float("inf"):
        return SyncDecision(True, table.min_gap, None)
    ok = table.min_gap > tolerance
    return SyncDecision(ok, table.min_gap, None if ok else table.witness)


@dataclass(frozen=True)
class EquivalenceDecision:
    equivalent: bool
    shift: Optional[Coord]
    reason: str = ""
    renumbering: Optional[tuple[int, int]] = None


def _order_perm(values: Sequence[Coord]) -> tuple[int, ...]:
    return tuple(sorted(range(len(values)), key=lambda i: values[i]))


def _candidate_shifts(lam: Sequence[Coord]):
    """0 first, then midpoints of the arcs cut by the breakpoints {-lam}."""
    yield Fraction(0) if all(isinstance(v, Fraction) for v in lam) else 0.0
    breaks = sorted({wrap(-v) for v in lam})
    nb = len(breaks)
    for i in range(nb):
        lo = breaks[i]
        hi = breaks[(i + 1) % nb] + (1 if i == nb - 1 else 0)
        if hi == lo:  # degenerate arc
            continue
        if not isinstance(lo, Fraction) and hi - lo < 1e-15:
            continue
        mid = (lo + hi) / 2
        yield wrap(mid)


def _shift_matches(tau: Sequence[Coord], lam: Sequence[Coord], alpha: Coord) -> bool:
    shifted = [wrap(v + alpha) for v in lam]
    return _order_perm(tau) == _order_perm(shifted)


def are_equivalent(
    pairA: CharacteristicPair,
    pairB: CharacteristicPair,
    renumbering: str = "identity",
) -> EquivalenceDecision:
    """Search for a shift ordering the two difference tables identically.

    Candidate shifts are 0 followed by the midpoints of the arcs into which
    the breakpoints {-lambda_km} cut the circle; the first candidate whose
    shifted table sorts like pairA's table is returned as the witness.

    The index alignment between the pairs is the caller's (identity by
    default).  ``renumbering="cyclic"`` additionally searches all
    cyclic-order-preserving rotations of pairB's numbering; this mode is
    experimental.

    Raises SizeMismatch when the side sizes differ and SynchronizedInput
    when either pair is synchronized.
    """
    K = len(pairA.plus)
    M = len(pairA.minus)
    if K != len(pairB.plus) or M != len(pairB.minus):
        raise SizeMismatch(
            f"sizes ({K},{M}) vs ({len(pairB.plus)},{len(pairB.minus)})"
        )
    if not is_non_synchronized(pairA).non_synchronized:
        raise SynchronizedInput("pairA is synchronized")
    if not is_non_synchronized(pairB).non_synchronized:
        raise SynchronizedInput("pairB is synchronized")

    if K * M == 0:
        return EquivalenceDecision(True, 0.0 if not pairA.plus.exact else Fraction(0))

    tau = difference_table(pairA).flat()
    lamB = difference_table(pairB)

    if renumbering == "identity":
        rotations = [(0, 0)]
    elif renumbering == "cyclic":
        rotations = [(rp, rm) for rp in range(K) for rm in range(M)]
    else:
        raise ValueError(f"unknown renumbering mode {renumbering!r}")

    for rp, rm in rotations:
        lam = [
            lamB.entries[((k - 1 + rp) % K + 1, (m - 1 + rm) % M + 1)]
            for k in range(1, K + 1)
            for m in range(1, M + 1)
        ]
        for alpha in _candidate_shifts(lam):
            if _shift_matches(tau, lam, alpha):
                ren = None if (rp, rm) == (0, 0) else (rp, rm)
                return EquivalenceDecision(True, alpha, renumbering=ren)
    return EquivalenceDecision(False, None, reason="orders differ for every shift")


# --- JSON wire format -------------------------------------------------------

def marked_set_to_obj(ms: MarkedSet) -> dict:
    pts = [str(p.value) if p.exact else p.value for p in ms.points]
    return {"points": pts, "classes": [list(b) for b in ms.classes]}


def marked_set_from_obj(obj: dict, tolerance: float = 1e-12) -> MarkedSet:
    if not isinstance(obj, dict) or "points" not in obj or "classes" not in obj:
        raise InvalidPartition("marked set object needs 'points' and 'classes'")
    return validate_marked_set(obj["points"], obj["classes"], tolerance=tolerance)


def pair_to_obj(pair: CharacteristicPair) -> dict:
    return {
        "plus": marked_set_to_obj(pair.plus),
        "minus": marked_set_to_obj(pair.minus),
    }


def pair_from_obj(obj: dict, tolerance: float = 1e-12) -> CharacteristicPair:
    if not isinstance(obj, dict) or "plus" not in obj or "minus" not in obj:
        raise InvalidPartition("pair object needs 'plus' and 'minus' marked sets")
    return CharacteristicPair(
        plus=marked_set_from_obj(obj["plus"], tolerance),
        minus=marked_set_from_obj(obj["minus"], tolerance),
    )
