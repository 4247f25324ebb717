"""Python access to the degenlab core (operators, proof constants, solver)."""

from ._core import (
    ConvergenceFailure,
    DomainError,
    Error,
    InfeasibleError,
    InvalidInput,
    OperatorSpec,
    PreconditionError,
    audit_h1,
    audit_h2,
    audit_h3,
    audit_h4,
    audit_homogeneity,
    certificate,
    eigvals,
    evaluate,
    op_norm,
    prop4_verify,
    solve,
    split_parts,
    theta_alpha,
)

__all__ = [
    "ConvergenceFailure",
    "DomainError",
    "Error",
    "InfeasibleError",
    "InvalidInput",
    "OperatorSpec",
    "PreconditionError",
    "audit_h1",
    "audit_h2",
    "audit_h3",
    "audit_h4",
    "audit_homogeneity",
    "certificate",
    "eigvals",
    "evaluate",
    "op_norm",
    "prop4_verify",
    "solve",
    "split_parts",
    "theta_alpha",
]
