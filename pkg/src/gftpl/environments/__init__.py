from .base import Environment
from .item_pricing import (
    ItemPricingEnvironment,
    item_pricing_outcome,
    item_pricing_translation,
    round_prices,
    single_minded,
    unit_demand,
)
from .level import (
    LevelAuctionEnvironment,
    level_index,
    level_probe_profiles,
    level_revenue,
    level_translation,
    minimum_winning_bid,
    winning_bidder,
)
from .multi_unit import (
    MultiUnitEnvironment,
    enumerate_allocations,
    exact_multiunit_dp,
    mir_dobzinski_nisan,
    mir_range_allocations,
    multi_unit_translation,
    welfare,
)
from .sispa import (
    SispaEnvironment,
    bidding_translation,
    capped_additive_valuation,
    enumerate_bid_space,
    sispa_utility,
    unit_demand_valuation,
)
from .vcg import (
    VcgReserveEnvironment,
    bit_implementing_weights,
    round_reserves,
    vcg_revenue,
    vcg_translation,
)

__all__ = [
    "Environment",
    "VcgReserveEnvironment", "vcg_revenue", "vcg_translation", "round_reserves",
    "bit_implementing_weights",
    "ItemPricingEnvironment", "item_pricing_outcome", "item_pricing_translation",
    "round_prices", "single_minded", "unit_demand",
    "LevelAuctionEnvironment", "level_index", "level_revenue", "level_translation",
    "level_probe_profiles", "minimum_winning_bid", "winning_bidder",
    "MultiUnitEnvironment", "welfare", "exact_multiunit_dp", "mir_dobzinski_nisan",
    "mir_range_allocations", "multi_unit_translation", "enumerate_allocations",
    "SispaEnvironment", "sispa_utility", "enumerate_bid_space", "bidding_translation",
    "unit_demand_valuation", "capped_additive_valuation",
]
