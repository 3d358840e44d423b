"""Exact polynomial toolkit, IPS certificate checking and lower-bound experiments."""

from ._ipsw import (
    Certificate,
    DomainError,
    Error,
    ParseError,
    Poly,
    ResourceError,
    SatisfiableError,
    cli,
    coeff_dim,
    eval_dim,
    leading_diagonal,
    leading_monomial,
    refute_mlf,
    refute_roabp,
    run_experiment,
    trailing_monomial,
)

__all__ = [
    "Certificate",
    "DomainError",
    "Error",
    "ParseError",
    "Poly",
    "ResourceError",
    "SatisfiableError",
    "cli",
    "coeff_dim",
    "eval_dim",
    "leading_diagonal",
    "leading_monomial",
    "refute_mlf",
    "refute_roabp",
    "run_experiment",
    "trailing_monomial",
]
