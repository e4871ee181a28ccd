"""Exact simulation of quantum property testers for hidden group properties."""

from .groups import (GroupSpec, Irrep, Subgroup, irrep_table, minimal_overgroups,
                     normal_closure, orthogonal, parse_group_spec, subgroup_close,
                     t_generated_normal_subgroups)
from .instances import (dist_to_ccr, dist_to_larger_period, dist_to_per, dist_to_range,
                        make_instance)
from .qsim import (FunctionOracle, PairOracle, SamplingDistribution,
                   fourier_sampling_distribution, fourier_sampling_distribution_general,
                   fourier_sampling_distribution_pair, pair_defect, qft_coset_state, sample,
                   state_defect)
from .testers import (TesterParams, Verdict, test_common_coset_range, test_larger_period,
                      test_larger_period_general)

__version__ = "0.1.0"

__all__ = [
    "GroupSpec", "Irrep", "Subgroup", "irrep_table", "minimal_overgroups", "normal_closure",
    "orthogonal", "parse_group_spec", "subgroup_close", "t_generated_normal_subgroups",
    "dist_to_ccr", "dist_to_larger_period", "dist_to_per", "dist_to_range", "make_instance",
    "FunctionOracle", "PairOracle", "SamplingDistribution", "fourier_sampling_distribution",
    "fourier_sampling_distribution_general", "fourier_sampling_distribution_pair",
    "pair_defect", "qft_coset_state", "sample", "state_defect",
    "TesterParams", "Verdict", "test_common_coset_range", "test_larger_period",
    "test_larger_period_general",
]
