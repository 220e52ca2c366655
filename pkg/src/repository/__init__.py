"""Repository layer: dataset files on disk."""

from src.repository.dataset_repository import DatasetRepository

__all__ = ["DatasetRepository"]
