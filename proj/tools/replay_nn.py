#!/usr/bin/env python3
"""Replays an exported network against the closed-loop rollout.

Each layer maps x_k to sum_m W[i][m] x^m_k + b[i]; adding the recorded noise
must reproduce the simulated x_{k+1}. Prints the worst per-step deviation and
exits 1 when it exceeds the tolerance.
"""

import argparse
import json
import sys


def forward(layer, x, dx):
    n = len(layer["b"])
    out = []
    for i in range(n):
        acc = list(layer["b"][i])
        for m in range(n):
            block = layer["W"][i][m]
            xm = x[m * dx:(m + 1) * dx]
            for r in range(dx):
                acc[r] += sum(block[r][c] * xm[c] for c in range(dx))
        out.extend(acc)
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("network")
    parser.add_argument("rollout")
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()

    with open(args.network) as f:
        net = json.load(f)
    with open(args.rollout) as f:
        roll = json.load(f)

    layers = net["layers"]
    states = roll["states"]
    noise = roll["noise"]
    if len(layers) != len(noise) or len(states) != len(layers) + 1:
        print("network and rollout lengths differ", file=sys.stderr)
        return 2
    dx = len(layers[0]["b"][0])
    worst = 0.0
    for k, layer in enumerate(layers):
        pred = forward(layer, states[k], dx)
        for p, w, x in zip(pred, noise[k], states[k + 1]):
            worst = max(worst, abs(p + w - x))
    print(f"layers={len(layers)} max_step_deviation={worst:.3e}")
    return 0 if worst <= args.tol else 1


if __name__ == "__main__":
    sys.exit(main())
