"""
TipTrait Detection File Parser

解析检测器输出：每行 `class cx cy w h [confidence]`，坐标为归一化值
"""
import math
from pathlib import Path
from typing import Optional, Union

from src.core import DetectionParseError
from src.domain import TipDetection

from .base import BaseParser, ParseResult, ParseWarning


class DetectionParser(BaseParser[list[TipDetection]]):
    """
    检测文件解析器

    - 空行跳过，其余行必须为 5 或 6 个空白分隔的十进制数
    - cx/cy 超出 [0,1] 时截断并记录带行号的警告
    - w/h ≤ 0 或格式错误抛出 DetectionParseError
    """

    def __init__(self, min_confidence: Optional[float] = None):
        super().__init__()
        if min_confidence is not None and not (0.0 <= min_confidence <= 1.0):
            raise ValueError(f"min_confidence must be in [0, 1], got {min_confidence}")
        self.min_confidence = min_confidence

    def parse(
        self,
        content: str,
        source: Optional[Union[str, Path]] = None,
        **kwargs,
    ) -> ParseResult[list[TipDetection]]:
        source_name = str(source) if source is not None else None
        detections: list[TipDetection] = []
        warnings: list[ParseWarning] = []
        dropped = 0

        for line_no, raw in enumerate(self._strip_bom(content).splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) not in (5, 6):
                raise DetectionParseError(
                    line_no, f"expected 5 or 6 fields, got {len(tokens)}", source_name
                )
            values = [self._parse_decimal(token, line_no, source_name) for token in tokens]

            class_value = values[0]
            if class_value < 0 or class_value != int(class_value):
                raise DetectionParseError(
                    line_no, f"class id must be a non-negative integer, got {tokens[0]}", source_name
                )
            cx, cy, w, h = values[1:5]
            if w <= 0 or h <= 0:
                raise DetectionParseError(
                    line_no, f"box extent must be positive, got w={tokens[3]} h={tokens[4]}", source_name
                )
            if w > 1 or h > 1:
                raise DetectionParseError(
                    line_no, f"box extent must be at most 1, got w={tokens[3]} h={tokens[4]}", source_name
                )
            confidence = values[5] if len(values) == 6 else None
            if confidence is not None and not (0.0 <= confidence <= 1.0):
                raise DetectionParseError(
                    line_no, f"confidence must be in [0, 1], got {tokens[5]}", source_name
                )

            clamped_cx = min(max(cx, 0.0), 1.0)
            clamped_cy = min(max(cy, 0.0), 1.0)
            if clamped_cx != cx:
                warnings.append(ParseWarning(line_no, f"cx {tokens[1]} clamped to {clamped_cx}", source_name))
            if clamped_cy != cy:
                warnings.append(ParseWarning(line_no, f"cy {tokens[2]} clamped to {clamped_cy}", source_name))

            if (
                self.min_confidence is not None
                and confidence is not None
                and confidence < self.min_confidence
            ):
                dropped += 1
                continue

            detections.append(
                TipDetection(
                    class_id=int(class_value),
                    cx=clamped_cx,
                    cy=clamped_cy,
                    w=w,
                    h=h,
                    confidence=confidence,
                )
            )

        for warning in warnings:
            self.logger.debug(warning.format())
        if dropped:
            self.logger.debug(f"{source_name or '<input>'}: {dropped} detection(s) below confidence threshold")
        return ParseResult(detections, warnings, {"below_threshold": dropped})

    @classmethod
    def _parse_decimal(cls, token: str, line_no: int, source: Optional[str]) -> float:
        try:
            value = cls._parse_float(token)
        except ValueError:
            raise DetectionParseError(line_no, f"non-numeric token {token!r}", source) from None
        if not math.isfinite(value):
            raise DetectionParseError(line_no, f"non-finite value {token!r}", source)
        return value


def parse_detection_file(
    text: str,
    image_width: int,
    image_height: int,
    *,
    min_confidence: Optional[float] = None,
    source: Optional[Union[str, Path]] = None,
) -> ParseResult[list[TipDetection]]:
    """
    解析一个检测文件

    Args:
        text: 文件内容
        image_width: 图像宽度（px），用于校验与结果元数据
        image_height: 图像高度（px）
        min_confidence: 置信度阈值（默认全部保留）
        source: 文件名，用于错误与警告信息

    Returns:
        ParseResult: data 为 TipDetection 列表（文件行序），warnings 为截断警告
    """
    if image_width <= 0 or image_height <= 0:
        raise ValueError(f"image size must be positive, got {image_width}x{image_height}")
    result = DetectionParser(min_confidence=min_confidence).parse(text, source=source)
    result.metadata.update({"image_width": image_width, "image_height": image_height})
    return result


def format_detection_line(detection: TipDetection) -> str:
    """写回检测文件的一行（最短可往返的浮点表示）"""
    fields = [
        str(detection.class_id),
        repr(float(detection.cx)),
        repr(float(detection.cy)),
        repr(float(detection.w)),
        repr(float(detection.h)),
    ]
    if detection.confidence is not None:
        fields.append(repr(float(detection.confidence)))
    return " ".join(fields)
