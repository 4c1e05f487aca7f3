"""Failure modes raised by the library.

Every error corresponds to a precondition or contract violation that a
caller can act on; plain bugs raise ordinary exceptions.
"""


class HopfCheckError(Exception):
    """Base class for all library failures."""


class SingularInput(HopfCheckError):
    """Matrix is singular where an invertible one is required."""


class Inconsistent(HopfCheckError):
    """Linear system has no solution within tolerance."""


class NotSemisimple(HopfCheckError):
    """Trace form of the algebra is degenerate; no block decomposition."""


class NotProjection(HopfCheckError):
    """Element fails p*=p or p²=p beyond tolerance."""


class NoIntegral(HopfCheckError):
    """The invariant-element system has no one-dimensional solution space."""


class CompatibilityFailure(HopfCheckError):
    """Matrix units cannot be made star/antipode compatible within tolerance."""


class ParentMismatch(HopfCheckError):
    """Elements belong to different algebras."""


class NotAGroup(HopfCheckError):
    """Cayley table violates the group axioms."""


class ParseError(HopfCheckError):
    """Input file or descriptor does not match the interchange schema."""


class WrongKind(HopfCheckError):
    """Input parses, but the operation needs a different algebra kind."""


class NotCounital(HopfCheckError):
    """(id ⊗ counit) of the given unitary is not 1."""


class NotAnAction(HopfCheckError):
    """The family of matrices is not a group homomorphism into *-automorphisms."""


class StructureFailure(HopfCheckError):
    """Constructed algebra violates associativity/involution axioms."""


class NotEquivalent(HopfCheckError):
    """Claimed exterior equivalence fails to produce an isomorphism."""


class NotInImage(HopfCheckError):
    """Element does not lie in the expected embedded subalgebra."""


class NotSaturated(HopfCheckError):
    """The coaction fails the saturation span condition."""


class CovarianceFailure(HopfCheckError):
    """Projection fails the compression identity on the designated scope."""


class NotPartition(HopfCheckError):
    """Projections indexed by the group fail the partition axioms."""


class LevelTooLarge(HopfCheckError):
    """Requested construction exceeds the configured dimension cap."""


class RankObstruction(HopfCheckError):
    """Murray-von Neumann rank hypothesis fails; no intertwiner exists."""


class GapTooLarge(HopfCheckError):
    """First-stage approximation misses the contraction basin."""


class WitnessQualityTooLow(HopfCheckError):
    """Witness residuals too large to run the dependent construction."""


class NoConvergence(HopfCheckError):
    """Iterative scheme did not reach the target within max_iter."""
