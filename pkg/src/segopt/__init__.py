"""segopt: exact optimal segmentations and volume-bias bounds for
Accuracy and Dice on probabilistic (noisy-annotator) label maps."""

from .dist import (
    ValueDistribution,
    VolumeInterval,
    build_distribution,
    build_weighted,
    cdf,
    cdf_left,
    integral_quantile,
    quantile,
)
from .errors import (
    DegenerateDiceError,
    DegenerateMarginalError,
    FieldValueError,
    FileFormatError,
    GridTooLargeError,
    MisalignedBreakpointError,
    SegoptError,
    ShapeMismatchError,
    UnachievableVolumeError,
)
from .field import (
    MarginalField,
    Segmentation,
    VolumeStats,
    as_field,
    complement,
    ensemble_marginal,
    ensemble_volume_stats,
)
from .gen import (
    gen_acc_lower,
    gen_acc_upper,
    gen_dice_sharp,
    gen_ensemble,
    gen_fig3,
    gen_fig4,
)
from .io import load, load_field, load_mask, save_field, save_field_raw, save_mask
from .metrics import EnsembleDiceGap, accuracy, dice, ensemble_dice_gap, overlap_mass
from .optimize import (
    ConstrainedOptimum,
    Metric,
    OptimalResult,
    OrderingCheck,
    ThresholdBracket,
    check_ordering,
    constrained_optimum,
    is_optimal_member,
    maximize_accuracy,
    maximize_dice,
    threshold_bracket,
)
from .oracle import (
    BruteForceResult,
    ConstrainedBruteForce,
    brute_force,
    brute_force_constrained,
)
from .reduced import accuracy_curve, constrained_overlap, delta, dice_curve

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "MarginalField",
    "Segmentation",
    "VolumeStats",
    "ValueDistribution",
    "VolumeInterval",
    "Metric",
    "OptimalResult",
    "OrderingCheck",
    "ConstrainedOptimum",
    "ThresholdBracket",
    "BruteForceResult",
    "ConstrainedBruteForce",
    "EnsembleDiceGap",
    "SegoptError",
    "ShapeMismatchError",
    "FieldValueError",
    "DegenerateDiceError",
    "DegenerateMarginalError",
    "GridTooLargeError",
    "UnachievableVolumeError",
    "MisalignedBreakpointError",
    "FileFormatError",
    "ensemble_marginal",
    "complement",
    "ensemble_volume_stats",
    "as_field",
    "build_distribution",
    "build_weighted",
    "cdf",
    "cdf_left",
    "quantile",
    "integral_quantile",
    "accuracy",
    "dice",
    "overlap_mass",
    "ensemble_dice_gap",
    "constrained_overlap",
    "accuracy_curve",
    "dice_curve",
    "delta",
    "maximize_accuracy",
    "maximize_dice",
    "check_ordering",
    "constrained_optimum",
    "threshold_bracket",
    "is_optimal_member",
    "brute_force",
    "brute_force_constrained",
    "gen_acc_lower",
    "gen_acc_upper",
    "gen_dice_sharp",
    "gen_fig3",
    "gen_fig4",
    "gen_ensemble",
    "load",
    "load_field",
    "load_mask",
    "save_field",
    "save_mask",
    "save_field_raw",
]
