"""braidweight: horizontal chord-diagram algebras and Chen-integral link invariants."""

from .algebra import (
    EVEN,
    ODD,
    AlgebraElement,
    ChordMonomial,
    RelationBasis,
    TensorElement,
    bracket,
    build_relation_basis,
    canonicalize_generator,
    coproduct,
    dim_quotient,
    multiply,
    normal_form,
    relation_generators,
    symmetric_action,
)
from .errors import CapacityError, SingularityError

__version__ = "0.1.0"
