"""Compare classifiers from cross-validation score tables.

Differences are A - B; every probability dict has the keys ``a_better``,
``rope`` and ``b_better``.
"""

from ._core import (
    BayesCmpError,
    bayes_ttest,
    correlated_ttest,
    decide,
    decide_loss,
    hierarchical,
    run_cli,
    sign_test,
    signed_rank,
    wilcoxon,
)

__all__ = [
    "BayesCmpError",
    "bayes_ttest",
    "correlated_ttest",
    "decide",
    "decide_loss",
    "hierarchical",
    "run_cli",
    "sign_test",
    "signed_rank",
    "wilcoxon",
]

__version__ = "0.1.0"
