"""Presentations of Elliott-Thomsen algebras: validation, minimal decomposition, direct sums."""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from ..errors import InvalidPresentationError, UnitalMismatchError

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


def _as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Presentation:
    """
    A(F1, F2, phi0, phi1) given by block sizes and gluing multiplicities.

    k[j] is the size of the j-th F1 block, dims[i] the size of the i-th F2
    block; alpha[i][j] and beta[i][j] are the multiplicities of the left and
    right gluing maps. Indices are 0-based.
    """

    k: Tuple[int, ...]
    dims: Tuple[int, ...]
    alpha: IntMatrix
    beta: IntMatrix
    unital: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'k', tuple(int(x) for x in self.k))
        object.__setattr__(self, 'dims', tuple(int(x) for x in self.dims))
        object.__setattr__(self, 'alpha', _as_matrix(self.alpha))
        object.__setattr__(self, 'beta', _as_matrix(self.beta))

    @property
    def p(self) -> int:
        return len(self.k)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.dims)

    @property
    def L(self) -> int:
        """Sum of the F2 block sizes."""
        return sum(self.dims)

    def alpha_weight(self, i: int) -> int:
        return sum(a * kj for a, kj in zip(self.alpha[i], self.k))

    def beta_weight(self, i: int) -> int:
        return sum(b * kj for b, kj in zip(self.beta[i], self.k))

    def difference(self) -> List[List[int]]:
        """The integer matrix alpha - beta (l x p)."""
        return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.alpha, self.beta)]

    def alpha_support(self, i: int) -> Tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.alpha[i]) if a > 0)

    def beta_support(self, i: int) -> Tuple[int, ...]:
        return tuple(j for j, b in enumerate(self.beta[i]) if b > 0)

    def max_fiber(self) -> int:
        return max(self.k + self.dims, default=0)

    @classmethod
    def empty(cls, unital: bool = True) -> 'Presentation':
        return cls(k=(), dims=(), alpha=(), beta=(), unital=unital)


@dataclass(frozen=True)
class Violation:
    """A single failed invariant."""

    invariant: str
    index: Tuple[int, ...]
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {'invariant': self.invariant, 'index': list(self.index), 'message': self.message}


@dataclass
class ValidationReport:
    """Findings of a structural validation; an empty list means ok."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, invariant: str, index: Tuple[int, ...], message: str) -> None:
        self.violations.append(Violation(invariant, tuple(index), message))

    def extend(self, other: 'ValidationReport') -> None:
        self.violations.extend(other.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {'ok': self.ok, 'violations': [v.to_dict() for v in self.violations]}


def validate_presentation(P: Presentation) -> ValidationReport:
    """
    Check every structural invariant of a presentation.

    Args:
        P: Presentation to check

    Returns:
        ValidationReport listing each violated invariant with its index
    """
    report = ValidationReport()

    for j, kj in enumerate(P.k):
        if kj <= 0:
            report.add('positive_k', (j,), f"k[{j}]={kj} must be positive")
    for i, li in enumerate(P.dims):
        if li <= 0:
            report.add('positive_dims', (i,), f"dims[{i}]={li} must be positive")

    for name, matrix in (('alpha', P.alpha), ('beta', P.beta)):
        if len(matrix) != P.l:
            report.add('shape', (), f"{name} has {len(matrix)} rows, expected {P.l}")
            continue
        for i, row in enumerate(matrix):
            if len(row) != P.p:
                report.add('shape', (i,), f"{name}[{i}] has {len(row)} columns, expected {P.p}")
                continue
            for j, x in enumerate(row):
                if x < 0:
                    report.add('nonnegative', (i, j), f"{name}[{i}][{j}]={x} is negative")

    if not report.ok:
        return report

    for i in range(P.l):
        for name, weight in (('alpha', P.alpha_weight(i)), ('beta', P.beta_weight(i))):
            if P.unital and weight != P.dims[i]:
                report.add('unital_row', (i,),
                           f"{name} row {i}: sum {weight} != dims[{i}]={P.dims[i]}")
            elif not P.unital and weight > P.dims[i]:
                report.add('row_bound', (i,),
                           f"{name} row {i}: sum {weight} > dims[{i}]={P.dims[i]}")
    return report


def require_valid(P: Presentation) -> None:
    report = validate_presentation(P)
    if not report.ok:
        raise InvalidPresentationError(
            f"invalid presentation: {report.violations[0].message}",
            violations=[v.to_dict() for v in report.violations],
        )


@dataclass(frozen=True)
class BlockMapping:
    """Original block indices carried by a summand, in summand order."""

    f1: Tuple[int, ...]
    f2: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {'f1': list(self.f1), 'f2': list(self.f2)}


def gluing_graph(P: Presentation) -> nx.Graph:
    """Bipartite graph with F1 nodes ('F1', j), F2 nodes ('F2', i) and gluing edges."""
    graph = nx.Graph()
    graph.add_nodes_from((('F1', j) for j in range(P.p)), bipartite=0)
    graph.add_nodes_from((('F2', i) for i in range(P.l)), bipartite=1)
    for i in range(P.l):
        for j in range(P.p):
            a, b = P.alpha[i][j], P.beta[i][j]
            if a + b > 0:
                graph.add_edge(('F1', j), ('F2', i), alpha=a, beta=b)
    return graph


def sub_presentation(P: Presentation, f1: Sequence[int], f2: Sequence[int]) -> Presentation:
    return Presentation(
        k=tuple(P.k[j] for j in f1),
        dims=tuple(P.dims[i] for i in f2),
        alpha=tuple(tuple(P.alpha[i][j] for j in f1) for i in f2),
        beta=tuple(tuple(P.beta[i][j] for j in f1) for i in f2),
        unital=P.unital,
    )


def decompose_minimal(P: Presentation) -> List[Tuple[Presentation, BlockMapping]]:
    """
    Split a presentation into its minimal (indecomposable) summands.

    Components of the gluing graph are returned ordered by their smallest
    F1 index, then by their smallest F2 index for components without F1 blocks.

    Args:
        P: Valid presentation

    Returns:
        List of (summand, block mapping) pairs
    """
    require_valid(P)
    graph = gluing_graph(P)

    components = []
    for nodes in nx.connected_components(graph):
        f1 = sorted(j for kind, j in nodes if kind == 'F1')
        f2 = sorted(i for kind, i in nodes if kind == 'F2')
        components.append((f1, f2))
    components.sort(key=lambda c: (0, c[0][0]) if c[0] else (1, c[1][0]))

    result = []
    for f1, f2 in components:
        mapping = BlockMapping(tuple(f1), tuple(f2))
        result.append((sub_presentation(P, f1, f2), mapping))

    logger.debug(f"decomposed presentation with p={P.p}, l={P.l} into {len(result)} summands")
    return result


def direct_sum(P1: Presentation, P2: Presentation) -> Presentation:
    """
    Block-diagonal concatenation of two presentations.

    Raises:
        UnitalMismatchError: if exactly one of the inputs is unital
    """
    if P1.unital != P2.unital:
        raise UnitalMismatchError("cannot sum a unital and a non-unital presentation")

    alpha = [tuple(row) + (0,) * P2.p for row in P1.alpha]
    alpha += [(0,) * P1.p + tuple(row) for row in P2.alpha]
    beta = [tuple(row) + (0,) * P2.p for row in P1.beta]
    beta += [(0,) * P1.p + tuple(row) for row in P2.beta]
    return Presentation(k=P1.k + P2.k, dims=P1.dims + P2.dims,
                        alpha=tuple(alpha), beta=tuple(beta), unital=P1.unital)


def direct_sum_all(parts: Sequence[Presentation], unital: bool = True) -> Presentation:
    total = Presentation.empty(unital)
    for part in parts:
        total = direct_sum(total, part)
    return total


def permute(P: Presentation, f1_order: Sequence[int], f2_order: Sequence[int]) -> Presentation:
    """Reorder blocks; position q of the result holds original block order[q]."""
    return sub_presentation(P, f1_order, f2_order)


def equivalent_up_to_permutation(P: Presentation, Q: Presentation) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Find block permutations carrying P to Q.

    Returns:
        (f1_order, f2_order) with permute(P, f1_order, f2_order) == Q, or None
    """
    if sorted(P.k) != sorted(Q.k) or sorted(P.dims) != sorted(Q.dims) or P.unital != Q.unital:
        return None

    target_rows = {}
    for i in range(Q.l):
        key = (Q.dims[i], Q.alpha[i], Q.beta[i])
        target_rows.setdefault(key, []).append(i)

    for f1_order in itertools.permutations(range(P.p)):
        if tuple(P.k[j] for j in f1_order) != Q.k:
            continue
        candidate = permute(P, f1_order, range(P.l))
        buckets = {key: list(rows) for key, rows in target_rows.items()}
        f2_order = [None] * Q.l
        matched = True
        for i in range(candidate.l):
            key = (candidate.dims[i], candidate.alpha[i], candidate.beta[i])
            if not buckets.get(key):
                matched = False
                break
            f2_order[buckets[key].pop(0)] = i
        if matched:
            return tuple(f1_order), tuple(f2_order)
    return None
