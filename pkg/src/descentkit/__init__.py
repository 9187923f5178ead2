"""Descent of modules along faithfully flat maps of finite-dimensional local algebras."""

__version__ = "0.1.0"

from .field import GF2, QQ, Field, FieldDescriptor, Scalar, make_field, scalar_arith  # noqa: E402
from .algebra import Algebra, AlgebraMap, Grading, GradingSignature, IdealData  # noqa: E402
from .module import (  # noqa: E402
    Module,
    ModuleMap,
    base_change,
    direct_sum,
    free_module,
    hom_space,
    is_free_over_local,
    is_isomorphic,
    regular_module,
    restrict,
    trivial_module,
)
from .descent import (  # noqa: E402
    Certificate,
    ExtensionContext,
    Failure,
    build_context,
    compute_FGN,
    descend,
    descent_criterion,
    verify_certificate,
)
from .config import Config  # noqa: E402
from .kernels import BACKEND  # noqa: E402
