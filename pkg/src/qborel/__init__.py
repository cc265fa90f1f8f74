"""Exact matrix models, R-matrices, stable maps and q-characters for the
Borel subalgebra of the quantum loop algebra of affine sl2."""

from .cas import (
    PoleAtPoint,
    Scalar,
    q_binomial,
    q_exponential_truncated,
    q_number,
    q_number_spectral,
    substitute,
)
from .qchar import (
    EllWeight,
    QCharSeries,
    check_baxter_qt,
    check_iq_kr,
    check_qq_dual,
    check_wronskian,
    ellweight_basic,
    iq_involution,
    qchar_from_module,
    qchar_kr,
    qchar_prefund_minus,
    qchar_prefund_plus,
    series_mul,
)
from .repmod import (
    MissingDrinfeldData,
    ModuleModel,
    WindowTooSmall,
    check_relations,
    h_eigenvalues,
    invertible_module,
    kr_module,
    prefund_minus,
    prefund_plus,
    spectral_deform,
    tensor,
    twist,
)

__all__ = [name for name in dir() if not name.startswith("_")]
