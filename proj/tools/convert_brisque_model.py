#!/usr/bin/env python3
# Copyright 2026 The afkit Authors
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

"""Convert a libsvm epsilon-SVR BRISQUE model plus its svm-scale range file
into the plain-text afkit model format (see data/README.md)."""

import argparse
import sys

FEATURES = 36


def read_ranges(path):
    with open(path) as f:
        lines = [l.split() for l in f if l.strip()]
    if lines[0] != ["x"]:
        sys.exit(f"{path}: expected svm-scale feature range file")
    lower, upper = float(lines[1][0]), float(lines[1][1])
    ranges = [None] * FEATURES
    for parts in lines[2:]:
        idx = int(parts[0])
        if not 1 <= idx <= FEATURES:
            sys.exit(f"{path}: feature index {idx} out of range")
        ranges[idx - 1] = (float(parts[1]), float(parts[2]))
    if any(r is None for r in ranges):
        sys.exit(f"{path}: missing feature ranges")
    return lower, upper, ranges


def read_model(path):
    header = {}
    svs = []
    with open(path) as f:
        for line in f:
            if line.strip() == "SV":
                break
            key, *vals = line.split()
            header[key] = vals
        for line in f:
            parts = line.split()
            if not parts:
                continue
            coef = float(parts[0])
            vec = [0.0] * FEATURES  # libsvm omits zero entries
            for item in parts[1:]:
                idx, val = item.split(":")
                vec[int(idx) - 1] = float(val)
            svs.append((coef, vec))
    if header.get("svm_type") != ["epsilon_svr"] or header.get("kernel_type") != ["rbf"]:
        sys.exit(f"{path}: only epsilon_svr/rbf models are supported")
    if int(header["total_sv"][0]) != len(svs):
        sys.exit(f"{path}: total_sv does not match the SV block")
    return float(header["gamma"][0]), float(header["rho"][0]), svs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", required=True, help="libsvm model file")
    ap.add_argument("--ranges", required=True, help="svm-scale range file")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    lower, upper, ranges = read_ranges(args.ranges)
    gamma, rho, svs = read_model(args.model)
    with open(args.out, "w") as out:
        out.write("afkit-brisque-model 1\n")
        out.write(f"features {FEATURES}\n")
        out.write(f"gamma {gamma!r}\n")
        out.write(f"rho {rho!r}\n")
        out.write(f"scale {lower!r} {upper!r}\n")
        out.write("ranges\n")
        for lo, hi in ranges:
            out.write(f"{lo!r} {hi!r}\n")
        out.write(f"support_vectors {len(svs)}\n")
        for coef, vec in svs:
            out.write(" ".join(repr(v) for v in [coef] + vec) + "\n")
        out.write("end\n")


if __name__ == "__main__":
    main()
