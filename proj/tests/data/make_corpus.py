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
"""Regenerates tests/data/corpus from the sample photos bundled with
scikit-image. Crops are fixed by the seed below; rerunning gives the same
files."""

import os

import numpy as np
from PIL import Image
from skimage import data

SOURCES = ["astronaut", "chelsea", "coffee", "rocket", "immunohistochemistry"]
SIZES = [(128, 128), (160, 120), (97, 131), (144, 144), (200, 150)]  # (w, h)
COUNT = 24


def main():
    out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")
    os.makedirs(out, exist_ok=True)
    rng = np.random.RandomState(2026)
    images = {name: getattr(data, name)() for name in SOURCES}
    for i in range(COUNT):
        name = SOURCES[i % len(SOURCES)]
        img = images[name]
        w, h = SIZES[(i // len(SOURCES) + i) % len(SIZES)]
        y = rng.randint(0, img.shape[0] - h + 1)
        x = rng.randint(0, img.shape[1] - w + 1)
        crop = np.ascontiguousarray(img[y:y + h, x:x + w, :3])
        short = "ihc" if name == "immunohistochemistry" else name
        Image.fromarray(crop).save(os.path.join(out, f"{i:02d}_{short}.png"), optimize=True)


if __name__ == "__main__":
    main()
