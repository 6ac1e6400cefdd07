from ._hkm import (
    Alignment,
    Bicluster,
    DomainError,
    ExpressionMatrix,
    Hit,
    HkmResult,
    ParseError,
    ValidationError,
    bicluster,
    cluster,
    fom_curve,
    load_expression_matrix,
    mean_squared_residue,
    pearson,
    search,
    smith_waterman,
)

__all__ = [
    "Alignment",
    "Bicluster",
    "DomainError",
    "ExpressionMatrix",
    "Hit",
    "HkmResult",
    "ParseError",
    "ValidationError",
    "bicluster",
    "cluster",
    "fom_curve",
    "load_expression_matrix",
    "mean_squared_residue",
    "pearson",
    "search",
    "smith_waterman",
]
