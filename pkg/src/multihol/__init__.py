"""Multiple holomorphs of class-two p-groups through bilinear forms."""
from .class2_group import PAIR_ORDER, GroupElement, GroupSpec, load_spec
from .errors import (
    BoundExceeded,
    InputError,
    MultiholError,
    PreconditionError,
    VerificationFailed,
)
from .ff_linalg import FpMatrix
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "PAIR_ORDER",
    "BoundExceeded",
    "FpMatrix",
    "GroupElement",
    "GroupSpec",
    "InputError",
    "MultiholError",
    "PreconditionError",
    "VerificationFailed",
    "load_spec",
]
