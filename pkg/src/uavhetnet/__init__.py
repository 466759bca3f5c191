"""UAV-assisted heterogeneous network capacity simulator.

A deterministic simulator of a macro cell overlaid with aerial base
stations: the hexagonal cell is partitioned into demand zones along guider
rays, aerial nodes are matched to zones by iteratively minimising demand
density / deployment cost functions, and capacity and delay metrics are
measured against a no-UAV baseline.
"""

from .channel import (ChannelParams, LinkGeometry, db_to_linear, dbm_to_watts,
                      linear_to_db, link_geometry, los_available, rx_power,
                      sinr, spectral_efficiency, watts_to_dbm)
from .cost import (AdmissionResult, CostReport, admission_constraint,
                   cost_area, cost_uav, density_area, density_area_average,
                   density_uav, overall_cost, poisson_pmf)
from .mapper import (Assignment, StaticCostInstance, greedy_assign,
                     iterate_mapping, rank_zones, uav_position_for_zone)
from .metrics import (MetricsReport, StepTable, delay_statistics,
                      guaranteed_sinr_probability, percentile,
                      report_from_table, throughput_coverage)
from .runner import (DeploymentCostModel, RunPlan, RunResult, UavState, run,
                     sweep, write_outputs)
from .scenario import (Scenario, UserEquipment, Zone, build_hex_cell,
                       hex_area, hex_contains, min_uav_count, partition_zones,
                       place_users, standard_guider_angles)
from .traffic import (DelayBreakdown, TrafficParams, area_load,
                      generate_requests, queue_delay, total_delay, user_load)

__version__ = "0.1.0"
