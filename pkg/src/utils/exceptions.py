class RigidityToolkitError(Exception):
    """Base class for every error raised by the toolkit"""


class InvalidInput(RigidityToolkitError, ValueError):
    pass


class SizeLimitExceeded(RigidityToolkitError, ValueError):
    pass


# graph_core
class NotSimple(RigidityToolkitError, ValueError):
    pass


class ImproperSubgraph(RigidityToolkitError, ValueError):
    pass


# moves
class InvalidVertices(RigidityToolkitError, ValueError):
    pass


class InvalidEdge(RigidityToolkitError, ValueError):
    pass


class InvalidThirdVertex(RigidityToolkitError, ValueError):
    pass


class WrongDegree(RigidityToolkitError, ValueError):
    pass


class NotLaman(RigidityToolkitError, ValueError):
    pass


class NotLamanPlusOne(RigidityToolkitError, ValueError):
    pass


class NotType2Maximal(RigidityToolkitError, ValueError):
    pass


class NotConeGraph(RigidityToolkitError, ValueError):
    pass


class IllFormedStep(RigidityToolkitError, ValueError):
    def __init__(self, step_index: int, message: str):
        super().__init__(f"Step {step_index}: {message}")
        self.step_index = step_index


# surfaces / rigidity
class PointOffSurface(RigidityToolkitError, ValueError):
    pass


class DimensionMismatch(RigidityToolkitError, ValueError):
    pass


class DegenerateSample(RigidityToolkitError):
    """A rational sample landed too close to an irregular configuration"""


class SamplingFailed(RigidityToolkitError):
    pass


class NoConvergence(RigidityToolkitError):
    pass


# flexes
class NoNontrivialFlex(RigidityToolkitError):
    pass


class CorrectionDiverged(RigidityToolkitError):
    pass
