from oupac import SymmetricMatrix
from oupac.rng import make_rng


def random_symmetric(dim: int, seed: int, scale: float = 1.0) -> SymmetricMatrix:
    """Random symmetric (not necessarily definite) matrix."""
    g = make_rng(seed).standard_normal((dim, dim)) * scale
    return SymmetricMatrix(g)
