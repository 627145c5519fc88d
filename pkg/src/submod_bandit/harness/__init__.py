from .config import ExperimentConfig, load_config, parse_config
from .data import (RatingsTable, build_user_weights, filter_topics_by_correlation, load_ratings_csv,
                   load_relevance_csv, synthesize_dataset, synthesize_ratings, write_ratings_csv,
                   write_relevance_csv)
from .sweep import TrialRecord, emit_chart, emit_csv, run_experiment, run_sweep
