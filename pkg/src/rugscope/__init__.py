"""rugscope: rule-based and learned detection of NFT rug-pull scams.

The layers, bottom up: `records`/`ingest` define and load project event
timelines; `detector` runs the four-check rule conjunction; `tricks` scans
for individual scam mechanics; `features` produces the fixed 55-value
vector; `learn` labels, trains, and evaluates classifiers; `monitor` turns
trained models into a daily alarm loop; `synth` generates seeded scenarios
for testing all of the above.
"""
from .detector import (
    CheckResult,
    Checker,
    DetectionReport,
    PricePoint,
    PriceSequence,
    detect_rug_pull,
    drawdown_sequence,
    price_sequence,
    recovery,
)
from .errors import ParseError, RugscopeError
from .features import (
    FEATURE_COUNT,
    FEATURE_NAMES,
    FeatureVector,
    featurize,
    read_features_csv,
    write_features_csv,
)
from .ingest import build_timeline, load_manifest, slice_until, write_manifest
from .learn import (
    LabeledDataset,
    Model,
    build_dataset,
    determine_t_rp,
    evaluate,
    load_model,
    predict,
    save_model,
    train_forest,
    train_logreg,
    train_svm,
)
from .monitor import (
    AlarmRecord,
    AlarmReport,
    MonitorState,
    load_state,
    replay,
    run_daily,
    save_state,
)
from .records import (
    ProjectMetadata,
    ProjectTimeline,
    SocialSnapshot,
    TradeRecord,
    TransferEvent,
)
from .tricks import (
    Trick,
    TrickFinding,
    TrickReport,
    analyze_tricks,
    levenshtein_distance,
    levenshtein_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "AlarmRecord",
    "AlarmReport",
    "CheckResult",
    "Checker",
    "DetectionReport",
    "FEATURE_COUNT",
    "FEATURE_NAMES",
    "FeatureVector",
    "LabeledDataset",
    "Model",
    "MonitorState",
    "ParseError",
    "PricePoint",
    "PriceSequence",
    "ProjectMetadata",
    "ProjectTimeline",
    "RugscopeError",
    "SocialSnapshot",
    "TradeRecord",
    "TransferEvent",
    "Trick",
    "TrickFinding",
    "TrickReport",
    "analyze_tricks",
    "build_dataset",
    "build_timeline",
    "detect_rug_pull",
    "determine_t_rp",
    "drawdown_sequence",
    "evaluate",
    "featurize",
    "levenshtein_distance",
    "levenshtein_ratio",
    "load_manifest",
    "load_model",
    "load_state",
    "predict",
    "price_sequence",
    "read_features_csv",
    "recovery",
    "replay",
    "run_daily",
    "save_model",
    "save_state",
    "slice_until",
    "train_forest",
    "train_logreg",
    "train_svm",
    "write_features_csv",
    "write_manifest",
]
