"""Error types shared across the package.

Plain ``ValueError`` is used for domain errors (bad indices, mismatched
strand counts, malformed permutations).  The two classes below mark
failure modes that callers may want to handle separately: refusing an
oversized computation, and hitting a near-singular configuration during
numerical integration.
"""


class CapacityError(RuntimeError):
    """A computation was refused because it exceeds the configured ceiling."""


class SingularityError(RuntimeError):
    """Points of a configuration came closer than the allowed clearance."""
