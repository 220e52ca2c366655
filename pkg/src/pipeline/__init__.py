"""Analysis pipeline orchestration."""

from src.pipeline.processor import AnalysisPipeline, AnalysisResult, Dataset

__all__ = ["AnalysisPipeline", "AnalysisResult", "Dataset"]
