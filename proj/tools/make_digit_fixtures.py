#!/usr/bin/env python3
"""Write 32x32 binary ASCII-grid digit images in the root/<category>/<file> layout.

Two sources are supported:

  * scikit-learn's bundled handwritten digits (default, works offline). Each
    8x8 image (intensity 0..16) is bilinearly upsampled to 32x32 and
    thresholded at mid-intensity. The first 53 images of digit 1 and the
    first 55 of digits 2..9 are kept, 493 images in total.

  * a Chars74K "EnglishHnd" checkout (--chars74k DIR). Sample002..Sample010
    hold digits 1..9. Each PNG is converted to grayscale, thresholded at
    mid-intensity (dark ink -> 1) and resized to 32x32 by nearest neighbour.
    --crop first crops to the ink bounding box.
"""

import argparse
import pathlib
import sys

import numpy as np

PER_DIGIT = {1: 53, **{d: 55 for d in range(2, 10)}}


def write_grid(path: pathlib.Path, pixels: np.ndarray) -> None:
    rows = ["".join("1" if v else "0" for v in row) for row in pixels]
    path.write_text("\n".join(rows) + "\n")


def from_sklearn(size: int):
    from scipy import ndimage
    from sklearn.datasets import load_digits

    digits = load_digits()
    taken = {d: 0 for d in PER_DIGIT}
    for image, label in zip(digits.images, digits.target):
        label = int(label)
        if label not in PER_DIGIT or taken[label] >= PER_DIGIT[label]:
            continue
        taken[label] += 1
        big = ndimage.zoom(image, size / image.shape[0], order=1)
        yield label, taken[label], (big >= 8.0).astype(np.uint8)


def from_chars74k(root: pathlib.Path, size: int, crop: bool):
    from PIL import Image

    img_root = root / "Img" if (root / "Img").is_dir() else root
    for digit in PER_DIGIT:
        sample = img_root / f"Sample{digit + 1:03d}"
        if not sample.is_dir():
            raise SystemExit(f"missing {sample}")
        for n, png in enumerate(sorted(sample.glob("*.png")), start=1):
            gray = np.asarray(Image.open(png).convert("L"))
            ink = (gray < 128).astype(np.uint8)
            if crop and ink.any():
                ys, xs = np.nonzero(ink)
                ink = ink[ys.min() : ys.max() + 1, xs.min() : xs.max() + 1]
            resized = Image.fromarray(ink * 255).resize((size, size), Image.NEAREST)
            yield digit, n, (np.asarray(resized) > 127).astype(np.uint8)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("out", type=pathlib.Path, help="output dataset root")
    parser.add_argument("--size", type=int, default=32)
    parser.add_argument("--chars74k", type=pathlib.Path, help="EnglishHnd root instead of scikit-learn digits")
    parser.add_argument("--crop", action="store_true", help="crop Chars74K images to the ink bounding box")
    args = parser.parse_args(argv)

    source = from_chars74k(args.chars74k, args.size, args.crop) if args.chars74k else from_sklearn(args.size)
    count = 0
    for digit, n, pixels in source:
        folder = args.out / str(digit)
        folder.mkdir(parents=True, exist_ok=True)
        write_grid(folder / f"{digit}_{n:03d}.txt", pixels)
        count += 1
    print(f"wrote {count} images under {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
