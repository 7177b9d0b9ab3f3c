"""Word-document matrices, term statistics, factor analysis and semantic maps."""

from ._core import (
    ARTIFACTS,
    CowordError,
    FactorSolution,
    WordDocMatrix,
    __version__,
    assign_factors,
    chi_square,
    cooccurrence,
    cosine_matrix,
    expected_matrix,
    factor_analyze,
    format_pajek_net,
    fruchterman_reingold,
    kamada_kawai,
    obs_exp,
    parse_pajek_net,
    pearson_matrix,
    run_pipeline,
    run_stage,
    select_terms,
    tfidf_matrix,
    tfidf_per_term,
    tokenize,
    truncated_svd,
    varimax,
    word_doc_matrix,
)

__all__ = [
    "ARTIFACTS",
    "CowordError",
    "FactorSolution",
    "WordDocMatrix",
    "__version__",
    "assign_factors",
    "chi_square",
    "cooccurrence",
    "cosine_matrix",
    "expected_matrix",
    "factor_analyze",
    "format_pajek_net",
    "fruchterman_reingold",
    "kamada_kawai",
    "obs_exp",
    "parse_pajek_net",
    "pearson_matrix",
    "run_pipeline",
    "run_stage",
    "select_terms",
    "tfidf_matrix",
    "tfidf_per_term",
    "tokenize",
    "truncated_svd",
    "varimax",
    "word_doc_matrix",
]
