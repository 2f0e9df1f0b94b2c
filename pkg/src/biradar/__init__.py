"""Two-radar FMCW localization toolkit.

Simulate single-channel beat signals for a two-radar scene, detect
targets per radar with cell-averaging CFAR, localize them in 2D by
bilateration, and suppress ghosts with range gating plus Kalman/GNN
multi-target tracking.
"""

from .bilateration import CandidatePoint, bilaterate, pair_detections
from .cfar import Detection, blank_near_field, ca_cfar, detect, prune
from .config import (
    SPEED_OF_LIGHT,
    CfarParams,
    GeometryConfig,
    PipelineConfig,
    RadarConfig,
    TrackerParams,
    load_config,
    parse_config,
)
from .errors import ConfigError, DataError
from .rangeproc import RangeProfile, bin_to_range, range_profile, refine_peak
from .simulate import Frame, Target, simulate_frames, synthesize_frame
from .tracking import (
    Track,
    Tracker,
    TrackSnapshot,
    TrackStatus,
    gnn_associate,
    kf_predict,
    kf_update,
    manage_lifecycle,
    solve_assignment,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "CandidatePoint",
    "CfarParams",
    "ConfigError",
    "DataError",
    "Detection",
    "Frame",
    "GeometryConfig",
    "PipelineConfig",
    "RadarConfig",
    "RangeProfile",
    "Target",
    "Track",
    "Tracker",
    "TrackSnapshot",
    "TrackStatus",
    "TrackerParams",
    "bilaterate",
    "bin_to_range",
    "blank_near_field",
    "ca_cfar",
    "detect",
    "gnn_associate",
    "kf_predict",
    "kf_update",
    "load_config",
    "manage_lifecycle",
    "pair_detections",
    "parse_config",
    "prune",
    "range_profile",
    "refine_peak",
    "simulate_frames",
    "solve_assignment",
    "synthesize_frame",
]
