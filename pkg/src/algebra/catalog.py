"""Small named presentations used by the CLI, the self-test and the tests."""

from .presentation import Presentation


def interval_algebra() -> Presentation:
    """C[0,1]: two one-dimensional vertices, one interval glued at 0 and at 1."""
    return Presentation(k=(1, 1), dims=(1,), alpha=((1, 0),), beta=((0, 1),))


def dimension_drop_example() -> Presentation:
    """M_2-valued functions with f(0) = diag(a, b) and f(1) = diag(a, a)."""
    return Presentation(k=(1, 1), dims=(2,), alpha=((1, 1),), beta=((2, 0),))


def loop_algebra() -> Presentation:
    """M_2-valued functions with f(0) = f(1) = diag(a, b) up to order."""
    return Presentation(k=(1, 1), dims=(2,), alpha=((1, 1),), beta=((1, 1),))


def matrix_algebra(n: int) -> Presentation:
    """M_n as a presentation with no interval blocks."""
    return Presentation(k=(n,), dims=(), alpha=(), beta=())


CATALOG = {
    'INT': interval_algebra,
    'P_DD': dimension_drop_example,
    'P_LOOP': loop_algebra,
}
