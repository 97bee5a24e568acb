"""Regenerate the 256x256 P5 test images from scikit-image's bundled data."""
import pathlib

import numpy as np
from skimage import color, data, transform

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def square_gray(img):
    if img.ndim == 3:
        img = color.rgb2gray(img)
    h, w = img.shape
    s = min(h, w)
    img = img[(h - s) // 2:(h - s) // 2 + s, (w - s) // 2:(w - s) // 2 + s]
    img = transform.resize(img, (256, 256), anti_aliasing=True)
    if img.max() > 1.0:
        img = img / 255.0
    return np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)


def write_pgm(path, img):
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (img.shape[1], img.shape[0]))
        f.write(img.tobytes())


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for name, img in (("camera", data.camera()),
                      ("astronaut", data.astronaut()),
                      ("coffee", data.coffee())):
        write_pgm(OUT / f"{name}.pgm", square_gray(img))
