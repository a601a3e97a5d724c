"""Fire dynamics and random cutting on uniform Cayley trees.

Vertices are 0-based. The heavy lifting lives in the compiled ``_core``
extension; this package re-exports it.
"""

from ._core import (
    Tree,
    borel_pmf,
    borel_tanner_pmf,
    chi_cdf,
    chi_square_gof,
    conditioned_borel_sample,
    dinf_cdf,
    dinf_moment,
    dinf_pdf,
    exhaustive_isolation_mean,
    fire_probability,
    first_cut_pmf,
    isolate,
    isolate_in_order,
    ks_statistic,
    prufer_decode,
    prufer_encode,
    rayleigh_cdf,
    run_experiment,
    run_fire,
    run_fire_coupled,
    sample_uniform_tree,
    spine_and_bushes,
    spine_pmf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
