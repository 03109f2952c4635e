"""
TipTrait Data Processors

数据集组装
"""

from .dataset_loader import DatasetLoader, load_dataset

__all__ = [
    "DatasetLoader",
    "load_dataset",
]
