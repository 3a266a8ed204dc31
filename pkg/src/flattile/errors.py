"""Exception hierarchy shared by all modules.

Every exception carries the name of the module that raised it so the CLI can
emit module-tagged messages and map each family onto an exit code.
"""


class FlatTileError(Exception):
    """Base class for all package errors."""

    module = "flattile"
    exit_code = 2

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class InvalidInput(FlatTileError):
    exit_code = 2


class InvariantViolation(FlatTileError):
    exit_code = 4


# combinatorial_map
class MapError(InvalidInput):
    module = "combinatorial_map"


class NotInvolution(MapError):
    pass


class FixedPoint(MapError):
    pass


class Disconnected(MapError):
    pass


class NotPermutation(MapError):
    pass


class OddEuler(InvariantViolation):
    module = "combinatorial_map"


# tiling_enumerator
class InadmissibleProfile(InvalidInput):
    module = "tiling_enumerator"


class ResourceBudgetExceeded(FlatTileError):
    module = "tiling_enumerator"
    exit_code = 3


# canonical_cover
class InternalInconsistency(InvariantViolation):
    module = "canonical_cover"


# lattice_geometry
class LatticeError(InvalidInput):
    module = "lattice_geometry"


class DegenerateProjection(InvariantViolation):
    module = "lattice_geometry"


class DegenerateForm(LatticeError):
    pass


class InfiniteCount(LatticeError):
    pass


# volume_numerics
class OutsidePositiveCone(InvalidInput):
    module = "volume_numerics"


class PreconditionError(InvalidInput):
    module = "volume_numerics"


# asymptotics_cli
class InsufficientData(InvalidInput):
    module = "asymptotics_cli"
