"""Multi-point distributions of TASEP and periodic TASEP."""

from ._tasep import (
    InvalidError,
    NumericalError,
    UnsupportedError,
    bethe_roots,
    ctmc_exact,
    flat,
    flat_probability,
    joint_probability,
    limit_probability,
    mc_joint,
    orthogonality_residual,
    periodic_probability,
    poisson_joint,
    signed_probability,
    step,
    t_ladder,
)

__all__ = [
    "InvalidError",
    "NumericalError",
    "UnsupportedError",
    "bethe_roots",
    "ctmc_exact",
    "flat",
    "flat_probability",
    "joint_probability",
    "limit_probability",
    "mc_joint",
    "orthogonality_residual",
    "periodic_probability",
    "poisson_joint",
    "signed_probability",
    "step",
    "t_ladder",
]
