"""Turn usage dumps into per-layer target-token vectors via a pretrained
transformer, writing the embedding wire format consumed downstream."""

from .encoder import (
    DEFAULT_MODEL,
    EncoderConfig,
    EncodingError,
    UsageRecord,
    encode_usages,
    mean_pool,
    read_usage_dump,
    select_window,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MODEL",
    "EncoderConfig",
    "EncodingError",
    "UsageRecord",
    "encode_usages",
    "mean_pool",
    "read_usage_dump",
    "select_window",
]
