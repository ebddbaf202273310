"""Exception types shared across the package."""


class SpinIsingError(Exception):
    """Base class for all package errors."""


class ParseError(SpinIsingError):
    """Malformed graph file line."""


class TopologyError(SpinIsingError):
    """A planar-graph invariant is violated (names the offending element)."""


class UnsupportedGenerator(SpinIsingError):
    """Requested built-in graph is not sphere-embeddable / not provided."""


class SizeLimit(SpinIsingError):
    """Input exceeds a configured enumeration or expansion bound."""


class NotACycle(SpinIsingError):
    """Edge sequence does not form a simple closed cycle."""


class OddVertexCount(SpinIsingError):
    """Kasteleyn construction needs an even number of vertices."""


class OddDimension(SpinIsingError):
    """Pfaffian of an odd-dimensional matrix requested."""


class NonUnitConstantTerm(SpinIsingError):
    """Series inversion needs constant term 1."""


class IncompatibleRadicands(SpinIsingError):
    """Addition of exact square-root scalars from different radical classes."""


class NotQuadratic(SpinIsingError):
    """Grassmann exponential argument must be homogeneous of degree 2."""


class IncompleteOrder(SpinIsingError):
    """Berezin integration order must list every generator exactly once."""


class InadmissibleColoring(SpinIsingError):
    """Edge coloring violates vertex parity or triangle inequalities."""


class InvalidEdge(SpinIsingError):
    """Whitehead move undefined on this edge (self-loop / multi-edge)."""


class ZeroCouplingDivision(SpinIsingError):
    """Angle-to-edge inversion divides by a zero angle coupling."""


class SingularCoupling(SpinIsingError):
    """Loop polynomial vanishes at the requested point (Fisher zero)."""


class PathNotSimple(SpinIsingError):
    """Correlation path must visit distinct vertices."""


class DivergentTail(SpinIsingError):
    """Color distribution tail does not converge at this coupling."""


class DegenerateTriangle(SpinIsingError):
    """Triangle side lengths violate the strict triangle inequality."""


class DomainError(SpinIsingError):
    """Real-valued function evaluated outside its domain."""
