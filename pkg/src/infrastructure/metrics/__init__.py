"""Run metrics output."""

from .metrics_writer import METRIC_COLUMNS, MetricsWriter, write_json, write_matrix_csv

__all__ = ["METRIC_COLUMNS", "MetricsWriter", "write_json", "write_matrix_csv"]
