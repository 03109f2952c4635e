"""
TipTrait Core Configuration

统一的配置管理，支持环境变量（TIPTRAIT_ 前缀）和 .env 文件
"""
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


LOG_LEVELS = {
    "error": "ERROR",
    "warn": "WARNING",
    "warning": "WARNING",
    "info": "INFO",
    "debug": "DEBUG",
}


class SynthDefaults(BaseSettings):
    """合成数据默认参数"""

    model_config = SettingsConfigDict(
        env_prefix="TIPTRAIT_SYNTH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    image_width: int = Field(default=6576, gt=0, description="图像宽度（px）")
    image_height: int = Field(default=4384, gt=0, description="图像高度（px）")
    box_w: float = Field(default=0.01, gt=0.0, le=1.0, description="叶尖框宽度（归一化）")
    box_h: float = Field(default=0.01, gt=0.0, le=1.0, description="叶尖框高度（归一化）")
    jitter_sd: float = Field(default=4.0, ge=0.0, description="检测抖动标准差（px）")
    drop_rate: float = Field(default=0.05, ge=0.0, lt=1.0, description="漏检率")
    spurious_rate: float = Field(default=0.02, ge=0.0, lt=1.0, description="误检率")


class AppSettings(BaseSettings):
    """应用配置"""

    model_config = SettingsConfigDict(
        env_prefix="TIPTRAIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # 日志配置：TIPTRAIT_LOG ∈ {error, warn, info, debug}
    log: str = Field(default="warn", description="日志级别")
    log_dir: Optional[Path] = Field(default=None, description="日志目录（为空则只输出到 stderr）")

    # 计算参数
    jobs: Optional[int] = Field(default=None, ge=1, description="并行 worker 数（为空=CPU 核数）")
    area_epsilon: float = Field(default=1e-9, gt=0.0, description="凸包面积退化阈值（px²）")
    match_radius_fraction: float = Field(
        default=0.02, gt=0.0, le=1.0, description="叶尖匹配半径（图像对角线比例）"
    )
    float_digits: int = Field(default=9, ge=1, le=17, description="CSV 浮点有效位数")

    # 树状图画布
    svg_width: int = Field(default=900, gt=0, description="SVG 宽度（px）")
    svg_height: int = Field(default=520, gt=0, description="SVG 高度（px）")

    synth: SynthDefaults = Field(default_factory=SynthDefaults)

    @field_validator("log")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """校验日志级别"""
        key = v.strip().lower()
        if key not in LOG_LEVELS:
            raise ValueError(f"log level must be one of error/warn/info/debug, got {v!r}")
        return key

    @field_validator("log_dir")
    @classmethod
    def ensure_log_dir(cls, v: Optional[Path]) -> Optional[Path]:
        """确保日志目录存在"""
        if v is not None:
            v.mkdir(parents=True, exist_ok=True)
        return v

    @property
    def loguru_level(self) -> str:
        """loguru 使用的级别名"""
        return LOG_LEVELS[self.log]


@lru_cache
def get_config() -> AppSettings:
    """
    获取配置单例

    使用lru_cache确保全局只有一个配置实例
    """
    return AppSettings()
