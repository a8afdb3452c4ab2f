"""
Symbolic test functions of type 1 and type 2 and their matrix-unit lifts.

A test function is never realized as a matrix: its eigenvalues at every
spectrum point are read off exact PL profiles.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from ..algebra.presentation import Presentation
from ..errors import ConstraintError, TaggedInputError
from ..spectrum.closed_sets import Piece, merge_pieces
from ..spectrum.elements import EigList, ProfileElement
from ..spectrum.piecewise import PLMap
from ..spectrum.points import Interior, SpectrumPoint, Theta

TYPE1 = 'type1'
TYPE2 = 'type2'


@dataclass(frozen=True)
class TestFunction:
    """
    kind 'type1': block j of F1 with per-row integers a[i] < a[i]+2 <= b[i].
    kind 'type2': block i of F2 with a grid-aligned set X inside [1/m, 1-1/m].

    lift is an optional matrix-unit tag (s, s') inside the block the function
    lives on; tagged functions belong to the enriched family and carry no
    eigenvalue list.
    """

    __test__ = False

    kind: str
    m: int
    j: Optional[int] = None
    a: Tuple[int, ...] = ()
    b: Tuple[int, ...] = ()
    i: Optional[int] = None
    X: Tuple[Piece, ...] = ()
    lift: Optional[Tuple[int, int]] = None

    @property
    def eta(self) -> Fraction:
        return Fraction(1, self.m)

    @property
    def is_tagged(self) -> bool:
        return self.lift is not None

    def key(self) -> str:
        if self.kind == TYPE1:
            body = f"type1(j={self.j},a={list(self.a)},b={list(self.b)},m={self.m})"
        else:
            xs = ",".join(f"[{p.lo},{p.hi}]" for p in self.X)
            body = f"type2(i={self.i},X={{{xs}}},m={self.m})"
        return body + (f"@{self.lift}" if self.lift else "")

    def left_ramp(self, i: int) -> PLMap:
        """1 on [0, a_i eta], 0 from (a_i+1) eta on."""
        eta = self.eta
        a = self.a[i]
        return PLMap([(0, 1), (a * eta, 1), ((a + 1) * eta, 0), (1, 0)])

    def right_ramp(self, i: int) -> PLMap:
        """0 up to (b_i-1) eta, 1 from b_i eta on."""
        eta = self.eta
        b = self.b[i]
        return PLMap([(0, 0), ((b - 1) * eta, 0), (b * eta, 1), (1, 1)])

    def tent(self) -> PLMap:
        """max(0, 1 - dist(t, X)/eta) on [0,1]."""
        eta = self.eta
        candidates = {Fraction(0), Fraction(1)}
        for p in self.X:
            candidates.update((p.lo - eta, p.lo, p.hi, p.hi + eta))
        for p, q in zip(self.X, self.X[1:]):
            candidates.add((p.hi + q.lo) / 2)
        grid = sorted(t for t in candidates if 0 <= t <= 1)

        def value(t: Fraction) -> Fraction:
            d = min(max(p.lo - t, t - p.hi, Fraction(0)) for p in self.X)
            return max(Fraction(0), 1 - d / eta)

        return PLMap((t, value(t)) for t in grid)

    def branches(self, P: Presentation, i: int) -> List[PLMap]:
        """The dims[i] eigenvalue branches on block i."""
        if self.kind == TYPE2:
            if i == self.i:
                return [self.tent()] * P.dims[i]
            return [PLMap.constant(0, 1, 0)] * P.dims[i]

        left, right = self.left_ramp(i), self.right_ramp(i)
        rank_left = P.alpha[i][self.j] * P.k[self.j]
        rank_right = P.beta[i][self.j] * P.k[self.j]
        xs = sorted(set(left.breakpoints) | set(right.breakpoints))
        out = []
        for r in range(P.dims[i]):
            use_left, use_right = r < rank_left, r < rank_right
            out.append(PLMap(
                (t, (left(t) if use_left else 0) + (right(t) if use_right else 0)) for t in xs
            ))
        return out

    def to_profile(self, P: Presentation) -> ProfileElement:
        if self.is_tagged:
            raise TaggedInputError(f"{self.key()} is tagged and has no eigenvalue profile")
        theta = []
        for jj in range(P.p):
            value = 1 if self.kind == TYPE1 and jj == self.j else 0
            theta.append((Fraction(value),) * P.k[jj])
        return ProfileElement(
            theta_eigs=tuple(theta),
            branches=tuple(tuple(self.branches(P, i)) for i in range(P.l)),
            name=self.key(),
        )

    def to_dict(self) -> dict:
        payload = {'schema': 'testfn/v1', 'kind': self.kind, 'm': self.m}
        if self.kind == TYPE1:
            payload.update({'j': self.j, 'a': list(self.a), 'b': list(self.b)})
        else:
            payload.update({'i': self.i, 'X': [p.to_dict() for p in self.X]})
        if self.lift is not None:
            payload['lift'] = list(self.lift)
        return payload


def make_type1(P: Presentation, m: int, j: int, a: Sequence[int], b: Sequence[int]) -> TestFunction:
    """
    Type-1 test function on F1 block j.

    Raises:
        ConstraintError: unless 0 <= a_i < a_i + 2 <= b_i <= m for every row
    """
    if m < 1:
        raise ConstraintError(f"grid size m={m} must be positive")
    if not 0 <= j < P.p:
        raise ConstraintError(f"F1 block {j} out of range")
    if len(a) != P.l or len(b) != P.l:
        raise ConstraintError(f"need {P.l} values for a and b")
    for i, (ai, bi) in enumerate(zip(a, b)):
        if not (0 <= ai and ai + 2 <= bi <= m):
            raise ConstraintError(f"row {i}: need 0 <= a < a+2 <= b <= m, got a={ai}, b={bi}, m={m}")
    return TestFunction(kind=TYPE1, m=m, j=j, a=tuple(int(x) for x in a), b=tuple(int(x) for x in b))


def make_type2(P: Presentation, m: int, i: int, X: Sequence) -> TestFunction:
    """
    Type-2 test function on F2 block i.

    Raises:
        ConstraintError: if X is empty, off the grid, or outside [1/m, 1 - 1/m]
    """
    if m < 2:
        raise ConstraintError(f"grid size m={m} leaves no room for type-2 functions")
    if not 0 <= i < P.l:
        raise ConstraintError(f"F2 block {i} out of range")
    pieces = merge_pieces(p if isinstance(p, Piece) else Piece(*p) for p in X)
    if not pieces:
        raise ConstraintError("type-2 set X must be nonempty")
    eta = Fraction(1, m)
    for p in pieces:
        for end in (p.lo, p.hi):
            if (end * m).denominator != 1:
                raise ConstraintError(f"{end} is not a grid point of 1/{m}")
        if p.lo < eta or p.hi > 1 - eta:
            raise ConstraintError(f"[{p.lo}, {p.hi}] leaves [{eta}, {1 - eta}]")
    return TestFunction(kind=TYPE2, m=m, i=i, X=pieces)


def lift_to_Htilde(P: Presentation, h: TestFunction) -> List[TestFunction]:
    """All matrix-unit tagged variants of h: k_j^2 for type 1, dims_i^2 for type 2."""
    if h.is_tagged:
        raise TaggedInputError(f"{h.key()} is already tagged")
    size = P.k[h.j] if h.kind == TYPE1 else P.dims[h.i]
    return [replace(h, lift=(s, t)) for s in range(size) for t in range(size)]


def kappa(h: TestFunction) -> TestFunction:
    """Forget the matrix-unit tag."""
    return replace(h, lift=None)


Element = Union[TestFunction, ProfileElement]


def as_profile(P: Presentation, f: Element) -> ProfileElement:
    return f.to_profile(P) if isinstance(f, TestFunction) else f


def eig_at(P: Presentation, h: Element, x: SpectrumPoint) -> EigList:
    """
    Eigenvalue list of h at x.

    Raises:
        TaggedInputError: for matrix-unit tagged test functions
    """
    if isinstance(h, TestFunction):
        if h.is_tagged:
            raise TaggedInputError(f"{h.key()} is tagged and has no eigenvalue list")
        if isinstance(x, Theta):
            value = 1 if h.kind == TYPE1 and x.j == h.j else 0
            return EigList((Fraction(value),) * P.k[x.j])
        return EigList.of(b(x.t) for b in h.branches(P, x.i))
    return h.eig_at(x)


def profile_samples(P: Presentation, h: Element, i: int) -> List[Tuple[Fraction, Tuple[Fraction, ...]]]:
    """(t, sorted eigenvalues) at every breakpoint of block i, for plotting."""
    profile = as_profile(P, h)
    return [(t, profile.eig_at(Interior(i, t)).values) for t in profile.block_breakpoints(i)]
