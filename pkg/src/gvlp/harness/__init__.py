"""Config-driven experiments and machine-readable reports."""
from .config import ExperimentConfig
from .report import ExperimentReport, Row, Verdict, emit_report

__all__ = ["ExperimentConfig", "ExperimentReport", "Row", "Verdict", "emit_report"]
