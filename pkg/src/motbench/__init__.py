"""Evaluation toolkit for multi-object tracking benchmarks in the MOTChallenge format."""

from .assignment import FORBIDDEN, brute_force_assignment, solve_assignment
from .benchmark import evaluate_benchmark, evaluate_sequences, report_to_json
from .detection import PrCurve, detection_stats, evaluate_detections
from .formats import (DETECTION, GROUND_TRUTH, RESULT, FormatError, ParsedFile,
                      SubmissionIncompleteError, ValidationError, ingest_submission, parse_csv,
                      parse_text, read_seqmap, sequence_stats, write_csv)
from .geometry import (BoundingBox, DetEntry, GtEntry, ObjectClass, ResultEntry, SequenceMeta,
                       clip_to_image, compute_visibility, iou)
from .matching import EvalConfig, EventLog, FrameEvents, MatchRecord, match_sequence
from .metrics import (BenchmarkReport, MetricsReport, accumulate, compute_metrics,
                      format_table, rank_trackers)
from .search import ParamSearchConfig, run_param_search
from .synth import SynthSpec, generate

__version__ = "0.1.0"
