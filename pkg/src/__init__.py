"""TipTrait - 水稻叶尖检测的表型性状提取与基因型聚类"""

__version__ = "1.0.0"
