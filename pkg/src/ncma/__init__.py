"""Constellation-domain multiple access with non-coherent massive MIMO.

Library layout:

* constellation -- per-user phase designs (EEP/UEP), joint constellation,
  uniqueness/min-distance/PAPR analysis, offset optimization.
* txchain       -- bit mapping and differential encoding.
* channel       -- Rayleigh / Rician / Gauss-Markov fading plus noise.
* receiver      -- antenna-averaged differential correlation and demapping.
* simkit        -- seeded Monte-Carlo SER/BER harness and sweeps.
* hybrid        -- orthogonal-slot grouping and group-size search.
* satplan       -- frequency-plan coloring and scenario presets.
* cli           -- the ``ncma`` command-line front end.
"""

from .channel import ChannelConfig, ChannelRealization, apply, realize
from .constellation import (
    CollisionError,
    DesignReport,
    IndividualConstellation,
    JointConstellation,
    build_joint,
    design_eep,
    design_report,
    design_uep,
    export_catalog,
    export_joint_csv,
    load_catalog,
    min_distance,
    optimize_offsets,
    papr,
    papr_db,
    validate_unique,
)
from .hybrid import HybridPlan, ThresholdReport, make_plan, rates, sum_rate, threshold_search
from .receiver import DetectionResult, DetectionStat, correlate, decide_bits, demap, detect
from .satplan import Color, FrequencyPlan, ScenarioPreset, beam_capacity, build_plan, scenario_preset
from .simkit import SimPoint, SimResult, run_point, sweep, wilson_interval
from .txchain import DiffFrame, SymbolFrame, diff_encode, map_bits, random_bits

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig",
    "ChannelRealization",
    "CollisionError",
    "Color",
    "DesignReport",
    "DetectionResult",
    "DetectionStat",
    "DiffFrame",
    "FrequencyPlan",
    "HybridPlan",
    "IndividualConstellation",
    "JointConstellation",
    "ScenarioPreset",
    "SimPoint",
    "SimResult",
    "SymbolFrame",
    "ThresholdReport",
    "apply",
    "beam_capacity",
    "build_joint",
    "build_plan",
    "correlate",
    "decide_bits",
    "demap",
    "design_eep",
    "design_report",
    "design_uep",
    "detect",
    "diff_encode",
    "export_catalog",
    "export_joint_csv",
    "load_catalog",
    "make_plan",
    "map_bits",
    "min_distance",
    "optimize_offsets",
    "papr",
    "papr_db",
    "random_bits",
    "rates",
    "realize",
    "run_point",
    "scenario_preset",
    "sum_rate",
    "sweep",
    "threshold_search",
    "validate_unique",
    "wilson_interval",
]
