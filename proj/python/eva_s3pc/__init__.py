"""Secure 3-party matrix computation: disguised multiplication, inversion,
hybrid multiplication with Monte-Carlo result verification, and vertically
partitioned linear regression."""

from eva_s3pc._eva import (
    DegenerateInputError,
    ShapeError,
    SingularMatrixError,
    __version__,
    comm_audit,
    s2phm,
    s2pi,
    s2pm,
    s3phm,
    s3plrp,
    s3plrt,
    s3pm,
    vertical_split,
)

__all__ = [
    "DegenerateInputError",
    "ShapeError",
    "SingularMatrixError",
    "__version__",
    "comm_audit",
    "s2phm",
    "s2pi",
    "s2pm",
    "s3phm",
    "s3plrp",
    "s3plrt",
    "s3pm",
    "vertical_split",
]
