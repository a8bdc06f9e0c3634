#!/usr/bin/env python3
# Copyright 2026 The trajformer Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""End-to-end checks of the trajformer CLI.

Ground truth is read straight from the dataset file and the mixture NLL is
recomputed here from predictions.csv, independently of the C++ code.
"""

import csv
import math
import pathlib
import shutil
import struct
import subprocess
import sys
import tempfile

TINY = [
    "--set", "model.encoder_layers=1", "--set", "model.decoder_layers=1",
    "--set", "model.encoder_dim=32", "--set", "model.encoder_heads=2",
    "--set", "model.latent_dim=16", "--set", "model.decoder_hidden=32",
    "--set", "model.decoder_heads=2",
    "--set", "train.epochs_adamw=2", "--set", "train.epochs_sgd=1",
    "--set", "train.batch_size=4", "--set", "train.lr_adamw=1e-3",
]

failures = []


def check(ok, what):
    print(("PASS " if ok else "FAIL ") + what)
    if not ok:
        failures.append(what)


def run(binary, *args, expect=0):
    proc = subprocess.run([binary, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        sys.stderr.write(proc.stdout + proc.stderr)
    return proc


class Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, fmt):
        values = struct.unpack_from("<" + fmt, self.data, self.pos)
        self.pos += struct.calcsize("<" + fmt)
        return values


def read_futures(path):
    r = Reader(pathlib.Path(path).read_bytes())
    assert r.data[:7] == b"SVMPDS1", "bad magic"
    r.pos = 7
    (count,) = r.take("I")
    futures = []
    for _ in range(count):
        r.take("QBfI")  # seed, kind, difficulty, target index
        agents, elements, lights, steps, horizon = r.take("5I")
        r.take("%df" % (8 * agents))
        for _ in range(elements):
            r.take("B3f")
            (points,) = r.take("I")
            r.take("%df" % (2 * points))
        for _ in range(lights):
            r.take("2fB")
        r.take("%df" % (3 * steps * agents))
        xy = r.take("%df" % (2 * horizon))
        futures.append([(xy[2 * t], xy[2 * t + 1]) for t in range(horizon)])
    assert r.pos == len(r.data), "trailing bytes"
    return futures


def mixture_nll(hyps, gt):
    # hyps: list of (c, [(x, y)] * T)
    horizon = len(gt)
    terms = []
    for c, pts in hyps:
        sq = math.fsum((px - gx) ** 2 + (py - gy) ** 2 for (px, py), (gx, gy) in zip(pts, gt))
        log_c = math.log(c) if c > 0 else -1e9
        terms.append(log_c - 0.5 * sq - horizon * math.log(2 * math.pi))
    top = max(terms)
    return -(top + math.log(math.fsum(math.exp(t - top) for t in terms)))


def read_predictions(path):
    scenes = {}
    with open(path, newline="") as f:
        rows = csv.DictReader(f)
        assert rows.fieldnames == ["scene_id", "k", "c_k", "U_hat", "t", "x", "y"], rows.fieldnames
        for row in rows:
            hyps = scenes.setdefault(int(row["scene_id"]), {})
            c, pts = hyps.setdefault(int(row["k"]), (float(row["c_k"]), []))
            assert int(row["t"]) == len(pts)
            pts.append((float(row["x"]), float(row["y"])))
    return [[scenes[s][k] for k in sorted(scenes[s])] for s in sorted(scenes)]


def read_summary(path):
    out = {}
    for line in pathlib.Path(path).read_text().splitlines():
        key, value = line.split(" = ")
        out[key] = float(value)
    return out


def close(a, b, tol=1e-5):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    binary = sys.argv[1]
    work = pathlib.Path(tempfile.mkdtemp(prefix="trajformer_cli_"))
    try:
        data = work / "train.bin"
        run(binary, "dataset", "--out", str(data), "--count", "12", "--seed-base", "100")
        check(data.exists(), "dataset command writes the file")

        def train():
            run(binary, "train", "--dataset", str(data), "--out", str(work / "run"), "--seed", "5", *TINY)
            return (work / "run" / "train.csv").read_bytes(), (work / "run" / "manifest.json").read_bytes()

        first = train()
        check(first == train(), "identical train.csv and manifest for identical runs")
        check(len(first[0].splitlines()) == 1 + 3 * 3, "train.csv has one row per step")
        ckpt = str(work / "run" / "model.ckpt")

        def evaluate():
            run(binary, "eval", "--dataset", str(data), "--checkpoint", ckpt, "--out", str(work / "eval"), "--seed", "9")
            return [(work / "eval" / f).read_bytes() for f in ("summary.txt", "metrics.csv", "manifest.json")]

        first = evaluate()
        second = evaluate()
        check(first[0] == second[0], "identical summary.txt for identical runs")
        check(first[1:] == second[1:], "identical metrics.csv and manifest for identical runs")

        run(binary, "predict", "--dataset", str(data), "--checkpoint", ckpt, "--out", str(work / "pred"), "--seed", "9")
        preds = read_predictions(work / "pred" / "predictions.csv")
        futures = read_futures(data)
        check(len(preds) == len(futures) == 12, "one prediction per scene")
        per_scene = [mixture_nll(p, gt) for p, gt in zip(preds, futures)]
        summary = read_summary(work / "eval" / "summary.txt")
        mean = math.fsum(per_scene) / len(per_scene)
        check(close(mean, summary["cNLL"]), "summary cNLL %.9g equals recomputed mean %.9g" % (summary["cNLL"], mean))
        with open(work / "eval" / "metrics.csv", newline="") as f:
            table = [float(r["cnll"]) for r in csv.DictReader(f)]
        check(all(close(a, b) for a, b in zip(table, per_scene)), "per-scene cnll matches the recomputation")

        empty = work / "empty.bin"
        proc = run(binary, "dataset", "--out", str(empty), "--count", "0")
        check(proc.returncode == 0, "dataset --count 0 succeeds")
        proc = run(binary, "eval", "--dataset", str(empty), "--checkpoint", ckpt, "--out", str(work / "e0"), expect=3)
        check(proc.returncode == 3, "eval on an empty dataset exits 3")
        check(proc.stderr.startswith("error: code=3 kind=empty_dataset msg="), "error line is machine readable")
        check(len(proc.stderr.strip().splitlines()) == 1, "error report is one line")

        proc = run(binary, "eval", "--dataset", str(work / "missing.bin"), "--checkpoint", ckpt,
                   "--out", str(work / "e1"), expect=2)
        check(proc.returncode == 2, "missing dataset exits 2")
        proc = run(binary, "eval", "--dataset", str(data), "--checkpoint", ckpt, "--out", str(work / "e2"),
                   "--config", str(empty), expect=3)
        check(proc.returncode == 3, "malformed config exits 3")
        proc = run(binary, "eval", "--dataset", str(data), "--checkpoint", ckpt, "--out", str(work / "e3"),
                   "--set", "model.latent_dim=24", expect=4)
        check(proc.returncode == 4, "checkpoint shape mismatch exits 4")

        run(binary, "plot", "--dataset", str(data), "--checkpoint", ckpt, "--out", str(work / "plot"),
            "--scene", "3", "--retention", str(work / "eval" / "retention.csv"))
        svg = (work / "plot" / "scene_3.svg").read_text()
        check(svg.count("<polyline") == 6, "trajectory plot has 6 polylines")
        check(svg.count(">p=") == 5 and "ADE=" in svg, "legend lists p and ADE per hypothesis")
        check((work / "plot" / "retention.svg").exists(), "retention plot written")
    finally:
        shutil.rmtree(work, ignore_errors=True)
    print("%d failure(s)" % len(failures))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
