#!/usr/bin/env python3
"""The embedding wire format and layer combination.

Contextualized encoders emit one vector per usage per layer. The wire
format is JSON Lines: a header with target/period/dimension/layer_count,
then one record per (usage, layer). Change measures consume a single
vector per usage, produced by averaging a chosen set of layers:
'first+last' averages layers {1, L}, 'last4' averages {L-3 .. L}.
"""

from pathlib import Path

import numpy as np

from lscd import (
    LayerEmbeddingSet,
    combine_layers,
    parse_embedding_file,
    resolve_layer_spec,
    write_embedding_file,
)

OUT = Path(__file__).parent / "_out"
OUT.mkdir(exist_ok=True)

# Synthesize a 12-layer set for 3 usages of one target in period t1.
rng = np.random.default_rng(7)
layer_count, n_usages, dim = 12, 3, 6
embedding_set = LayerEmbeddingSet(
    target="casa",
    period_id="t1",
    dimension=dim,
    layer_count=layer_count,
    usage_keys=tuple(f"t1:{i}:0" for i in range(n_usages)),
    layers={
        layer: rng.normal(size=(n_usages, dim)).astype(np.float32)
        for layer in range(1, layer_count + 1)
    },
)

path = OUT / "embeddings_casa_t1.jsonl"
write_embedding_file(embedding_set, path)
print(f"wrote {path} ({n_usages} usages x {layer_count} layers)")
print("header:", path.read_text(encoding="utf-8").splitlines()[0])

# Vectors are stored at float32 precision with round-trip-exact decimals,
# so parsing recovers every bit.
parsed = parse_embedding_file(path)
assert all(
    np.array_equal(parsed.layers[layer], embedding_set.layers[layer])
    for layer in parsed.layers
)
print("round trip is exact")

for preset in ("first+last", "last4"):
    spec = resolve_layer_spec(preset, parsed.layer_count)
    combined = combine_layers(parsed, spec)
    print(f"\npreset {preset} -> layers {sorted(spec.layer_indices)}")
    print(f"  combined matrix shape: {combined.vectors.shape}")

# the mean over a singleton spec is the identity on that layer
identity = combine_layers(parsed, resolve_layer_spec("12", parsed.layer_count))
assert np.array_equal(identity.vectors, parsed.layers[12].astype(np.float64))
print("\nsingleton spec reproduces layer 12 exactly")
