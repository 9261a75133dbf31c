"""Rate regions, relay schemes and gap checks for the three-user Y relay channel."""
from .allocation import allocate_powers, assign_subrates, classify_sector, verify_achievability
from .deterministic import DycParams, RelayMap
from .gaussian import ChannelConfig, build_inner_target_region, build_outer_region_g, check_gap
from .regions import LinearRegion, RateTuple, build_cutset_region, build_outer_region_d, contains, grid_equal
from .scheme import Infeasible, LevelPlan, build_plan, expand_rational, reduce_params, simulate_end_to_end, split_rates

__all__ = [
    "ChannelConfig", "DycParams", "Infeasible", "LevelPlan", "LinearRegion", "RateTuple", "RelayMap",
    "allocate_powers", "assign_subrates", "build_cutset_region", "build_inner_target_region",
    "build_outer_region_d", "build_outer_region_g", "build_plan", "check_gap", "classify_sector",
    "contains", "expand_rational", "grid_equal", "reduce_params", "simulate_end_to_end",
    "split_rates", "verify_achievability",
]
__version__ = "0.1.0"
