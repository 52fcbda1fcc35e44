"""Float64 reference forward pass for a small conv + Bi-LSTM model.

Writes tests/data/neural_small.psdw (weights in the PSDW1 layout, logits in
reverse name order) and tests/data/neural_small_expected.json.
"""
import json
import struct
import sys
from pathlib import Path

import numpy as np

CATEGORIES = sorted([
    "camera", "cloud", "envelope", "house", "jail_window", "square", "star",
    "avatar", "back", "cancel", "checkbox", "drop_down", "forward", "left_arrow",
    "menu", "play", "plus", "search", "setting", "share", "slider", "squiggle", "switch",
])

rng = np.random.default_rng(20240611)


def f32(a):
    return np.asarray(a, dtype=np.float32).astype(np.float64)


def conv(x, w, b, relu):
    steps = x.shape[0]
    out_ch, in_ch, k = w.shape
    left = (k - 1) // 2
    y = np.zeros((steps, out_ch))
    for t in range(steps):
        acc = b.copy()
        for j in range(k):
            src = t + j - left
            if 0 <= src < steps:
                acc += w[:, :, j] @ x[src]
        y[t] = np.maximum(acc, 0.0) if relu else acc
    return y


def sigmoid(v):
    return 1.0 / (1.0 + np.exp(-v))


def lstm(x, wi, wh, b, reverse):
    hidden = wh.shape[1]
    h = np.zeros(hidden)
    c = np.zeros(hidden)
    out = np.zeros((x.shape[0], hidden))
    order = range(x.shape[0] - 1, -1, -1) if reverse else range(x.shape[0])
    for t in order:
        g = wi @ x[t] + wh @ h + b
        i, f, gg, o = np.split(g, 4)
        c = sigmoid(f) * c + sigmoid(i) * np.tanh(gg)
        h = sigmoid(o) * np.tanh(c)
        out[t] = h
    return out


def main(root):
    steps = [(0.0, 0.0, 0)]
    for t in range(1, 12):
        steps.append((float(rng.uniform(-0.2, 0.2)), float(rng.uniform(-0.2, 0.2)), 1 if t in (5, 11) else 0))
    x = np.array(steps, dtype=np.float64)

    layers = []
    params = []
    conv1 = (f32(rng.uniform(-0.5, 0.5, (4, 3, 3))), f32(rng.uniform(-0.1, 0.1, 4)), True)
    conv2 = (f32(rng.uniform(-0.5, 0.5, (5, 4, 2))), f32(rng.uniform(-0.1, 0.1, 5)), False)
    layers += [(1, [3, 4, 3, 1]), (1, [4, 5, 2, 0])]
    params += [conv1[0], conv1[1], conv2[0], conv2[1]]

    def lstm_dir(inp, hid):
        return (f32(rng.uniform(-0.4, 0.4, (4 * hid, inp))), f32(rng.uniform(-0.4, 0.4, (4 * hid, hid))),
                f32(rng.uniform(-0.2, 0.2, 4 * hid)))

    l1 = (lstm_dir(5, 3), lstm_dir(5, 3))
    l2 = (lstm_dir(6, 2), lstm_dir(6, 2))
    layers += [(2, [5, 3]), (2, [6, 2]), (3, [])]
    for layer in (l1, l2):
        for d in layer:
            params += list(d)
    dense_w = f32(rng.uniform(-1.0, 1.0, (23, 4)))
    dense_b = f32(rng.uniform(-0.3, 0.3, 23))
    layers += [(4, [4, 23]), (5, [])]
    params += [dense_w, dense_b]

    h = conv(x, *conv1)
    h = conv(h, *conv2)
    for fwd, bwd in (l1, l2):
        h = np.concatenate([lstm(h, *fwd, False), lstm(h, *bwd, True)], axis=1)
    pooled = h.mean(axis=0)
    raw = dense_w @ pooled + dense_b  # in file (logit) order

    order = list(reversed(CATEGORIES))
    logits = {order[i]: raw[i] for i in range(23)}
    by_name = np.array([logits[c] for c in CATEGORIES])
    probs = np.exp(by_name - by_name.max())
    probs /= probs.sum()

    blob = bytearray(b"PSDW1")
    manifest = "".join(c + "\n" for c in order).encode()
    blob += struct.pack("<I", len(manifest)) + manifest
    blob += struct.pack("<II", 3, len(layers))
    for kind, dims in layers:
        blob += struct.pack("<" + "I" * (1 + len(dims)), kind, *dims)
    for p in params:
        blob += np.asarray(p, dtype="<f4").tobytes(order="C")

    data = Path(root) / "tests" / "data"
    (data / "neural_small.psdw").write_bytes(bytes(blob))
    expected = {
        "steps": [list(s) for s in steps],
        "logits": [float(v) for v in by_name],
        "probabilities": [float(v) for v in probs],
    }
    (data / "neural_small_expected.json").write_text(json.dumps(expected, indent=1) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
