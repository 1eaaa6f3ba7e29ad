"""Guard caps shared by every exhaustive computation in the package.

Breadth-first closures, brute-force enumeration and the backtracking
isomorphism test can all blow up on inputs that are only slightly larger than
intended. Each of them takes an explicit cap; the defaults live here, and the
node cap can be overridden from the environment::

    QCK_MAX_NODES=500000 qcrystals graph --mode limit --n 3 --depth 12
"""
import os

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_FILLINGS = 10 ** 7
DEFAULT_ISO_NODE_CAP = 5_000

MAX_NODES_ENV = "QCK_MAX_NODES"


class GuardExceeded(RuntimeError):
    """Raised when a computation hits one of the guard caps."""

    def __init__(self, cap_name: str, cap: int, detail: str = ""):
        self.cap_name = cap_name
        self.cap = cap
        msg = f"{cap_name} exceeded (cap {cap})"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


def default_max_nodes() -> int:
    """The node cap for crystal graph construction: ``$QCK_MAX_NODES`` if set,
    else :data:`DEFAULT_MAX_NODES`."""
    raw = os.environ.get(MAX_NODES_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError as e:
        raise ValueError(f"{MAX_NODES_ENV} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ValueError(f"{MAX_NODES_ENV} must be positive, got {value}")
    return value
