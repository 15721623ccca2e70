"""
Error types raised by the posets app.

Every error derives from LatticeLabError so management commands can map the
whole family onto exit code 2 in one place.
"""


class LatticeLabError(Exception):
    """Base class for all lab errors."""


class CycleError(LatticeLabError):
    def __init__(self, x: int, y: int):
        self.pair = (x, y)
        super().__init__(f"Cover relation contains a cycle through {x} and {y}")


class OrderAxiomViolated(LatticeLabError):
    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"Order relation is not {axiom}: {witness}")


class NotJoinSemilattice(LatticeLabError):
    def __init__(self, pair: tuple[int, int]):
        self.pair = pair
        super().__init__(f"Elements {pair[0]} and {pair[1]} have no least upper bound")


class SizeLimit(LatticeLabError):
    def __init__(self, what: str, size: int, bound: int):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what} needs {size} items, configured bound is {bound}")


class NotOrdinal(LatticeLabError):
    pass


class Unclassifiable(LatticeLabError):
    pass


class OrderTypeSyntaxError(LatticeLabError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class ModeUnsupported(LatticeLabError):
    pass


class ClaimViolation(LatticeLabError):
    """A construction step found the set it must choose from empty."""

    def __init__(self, message: str, downset: int | None = None):
        self.downset = downset
        super().__init__(message)


class PreconditionFailed(LatticeLabError):
    def __init__(self, condition: str, witness):
        self.condition = condition
        self.witness = witness
        super().__init__(f"Condition ({condition}) fails on {witness}")


class NotJoinPreserving(LatticeLabError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"Map does not preserve the join of {pair}")


class NotLattice(LatticeLabError):
    pass


class NotPowersetEmbeddable(LatticeLabError):
    pass


class ChainNotStrict(LatticeLabError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"Ideal chain is not strictly increasing at step {index}")


class ConstructionInvariantViolated(LatticeLabError):
    def __init__(self, claim: str, detail: str):
        self.claim = claim
        super().__init__(f"Claim {claim} failed: {detail}")


class PosetFormatError(LatticeLabError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ConfigError(LatticeLabError):
    pass


class UnknownGenerator(LatticeLabError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"Unknown generator '{name}'. Known: {', '.join(sorted(known))}")
