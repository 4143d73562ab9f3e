"""Command line for the usage encoder.

    usage-encoder --usages usages_casa_t1.jsonl --out embeddings_casa_t1.jsonl \
                  [--model ID_OR_PATH] [--max-length N] [--device cpu] [--batch-size N]

Reads one usage dump (one target/period) and writes the embedding wire
format. Exit status: 0 success, 2 bad input, 1 internal error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .encoder import DEFAULT_MODEL, EncoderConfig, EncodingError, encode_usages


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usage-encoder",
        description="Encode a usage dump into per-layer target-token vectors.",
    )
    parser.add_argument("--usages", required=True, help="usage dump JSONL")
    parser.add_argument("--out", required=True, help="output embedding JSONL")
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help=f"model identifier or local path (default {DEFAULT_MODEL})")
    parser.add_argument("--max-length", type=int, default=512,
                        help="maximum sequence length in subword pieces (default 512)")
    parser.add_argument("--device", default="cpu", help="torch device (default cpu)")
    parser.add_argument("--batch-size", type=int, default=8,
                        help="usages per forward pass (default 8)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = EncoderConfig(
            model=args.model,
            max_length=args.max_length,
            device=args.device,
            batch_size=args.batch_size,
        )
        encode_usages(args.usages, config, args.out)
    except (EncodingError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # pragma: no cover - defensive
        print(f"internal error: {err!r}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
