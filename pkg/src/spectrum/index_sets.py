"""Index-set taxonomy of a closed subset: which blocks it fills, touches or misses."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Tuple

from ..algebra.presentation import Presentation
from ..errors import NotClosedError
from .closed_sets import ClosedSubset, closure, is_closed


@dataclass(frozen=True)
class IndexSets:
    """
    J: thetas in Y. L0: empty blocks. L1: full blocks. La: the rest, with
    Ll (a piece [0, s], s < 1) and Lr (a piece [t, 1], t > 0) inside it.
    Lll and Lrr stay empty for piecewise-canonical sets.
    """

    J: FrozenSet[int]
    L0: FrozenSet[int]
    L1: FrozenSet[int]
    La: FrozenSet[int]
    Ll: FrozenSet[int]
    Lr: FrozenSet[int]
    Lll: FrozenSet[int] = frozenset()
    Lrr: FrozenSet[int] = frozenset()
    s: Dict[int, Fraction] = field(default_factory=dict)
    t: Dict[int, Fraction] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'J': sorted(self.J), 'L0': sorted(self.L0), 'L1': sorted(self.L1),
            'La': sorted(self.La), 'Ll': sorted(self.Ll), 'Lll': sorted(self.Lll),
            'Lr': sorted(self.Lr), 'Lrr': sorted(self.Lrr),
            's': {str(i): v for i, v in sorted(self.s.items())},
            't': {str(i): v for i, v in sorted(self.t.items())},
        }


def index_sets(P: Presentation, Y: ClosedSubset) -> IndexSets:
    """
    Classify the blocks of a closed set.

    Raises:
        NotClosedError: if Y is not its own closure
    """
    if not is_closed(P, Y):
        raise NotClosedError(f"set {Y} is not closed")

    L0, L1, La, Ll, Lr = set(), set(), set(), set(), set()
    s: Dict[int, Fraction] = {}
    t: Dict[int, Fraction] = {}
    for i, block in enumerate(Y.pieces):
        if not block:
            L0.add(i)
            continue
        if len(block) == 1 and block[0].lo == 0 and block[0].hi == 1:
            L1.add(i)
            continue
        La.add(i)
        first, last = block[0], block[-1]
        if first.lo == 0:
            Ll.add(i)
            s[i] = first.hi
        if last.hi == 1:
            Lr.add(i)
            t[i] = last.lo

    for i in Ll & Lr:
        if not s[i] < t[i]:
            raise NotClosedError(f"block {i}: s={s[i]} not below t={t[i]}")

    return IndexSets(
        J=frozenset(Y.thetas), L0=frozenset(L0), L1=frozenset(L1), La=frozenset(La),
        Ll=frozenset(Ll), Lr=frozenset(Lr), s=s, t=t,
    )


def normalized_index_sets(P: Presentation, S: ClosedSubset) -> Tuple[IndexSets, bool]:
    """Close S first; the flag reports whether closing changed it."""
    closed = closure(P, S)
    return index_sets(P, closed), closed != S
