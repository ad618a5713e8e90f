#!/usr/bin/env python3
"""Regenerate the test corpus under tests/corpus and tests/fixtures.

The benchmark images are procedural stand-ins for the classic test set: the
historical files are not redistributable, so each name gets a synthetic image
of the same class (resolution, grayscale/color, rough content character), and
the JPEG quality is searched so the encoded size lands near the classic
file's size (same bits per pixel regime). Five extra files carry restart
markers. Deterministic given the seeds below.
"""

import io
import os

import cv2
import numpy as np
from PIL import Image

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "corpus")
FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")


def smooth_noise(rng, h, w, cell, amp):
    """Bilinearly upsampled random grid: band-limited noise at one scale."""
    gh, gw = h // cell + 2, w // cell + 2
    grid = rng.standard_normal((gh, gw))
    img = cv2.resize(grid, (w, h), interpolation=cv2.INTER_CUBIC)
    return img * amp


def plasma(rng, h, w, octaves):
    acc = np.zeros((h, w))
    for cell, amp in octaves:
        acc += smooth_noise(rng, h, w, cell, amp)
    return acc


def vignette(h, w, strength=0.35):
    y, x = np.mgrid[0:h, 0:w]
    cy, cx = (h - 1) / 2, (w - 1) / 2
    r = np.sqrt(((y - cy) / h) ** 2 + ((x - cx) / w) ** 2)
    return 1.0 - strength * r**2


def soft_disc(h, w, cy, cx, radius, soften):
    y, x = np.mgrid[0:h, 0:w]
    r = np.sqrt((y - cy) ** 2 + (x - cx) ** 2)
    return np.clip((radius - r) / soften, 0.0, 1.0)


def soft_rect(h, w, y0, x0, y1, x1, soften):
    y, x = np.mgrid[0:h, 0:w]
    dy = np.minimum(y - y0, y1 - y)
    dx = np.minimum(x - x0, x1 - x)
    return np.clip(np.minimum(dy, dx) / soften, 0.0, 1.0)


def norm255(img):
    lo, hi = img.min(), img.max()
    return np.clip((img - lo) / (hi - lo) * 255.0, 0, 255).astype(np.uint8)


def photo_gray(seed, h, w, detail=1.0, shapes=0, gradient=0.6):
    """A photograph-like grayscale field: smooth base, edges, fine texture."""
    rng = np.random.default_rng(seed)
    img = plasma(rng, h, w, [(max(h // 3, 8), 60), (max(h // 8, 4), 30),
                             (16, 18 * detail), (6, 9 * detail), (2, 3.5 * detail)])
    y = np.linspace(0, 1, h)[:, None]
    img += gradient * 60.0 * y
    for _ in range(shapes):
        ky = rng.uniform(0.2, 0.8)
        kx = rng.uniform(0.2, 0.8)
        if rng.uniform() < 0.5:
            m = soft_disc(h, w, ky * h, kx * w, rng.uniform(0.08, 0.22) * h,
                          rng.uniform(1.5, 6.0))
        else:
            sy, sx = rng.uniform(0.1, 0.3), rng.uniform(0.1, 0.3)
            m = soft_rect(h, w, ky * h, kx * w, min((ky + sy) * h, h - 1),
                          min((kx + sx) * w, w - 1), rng.uniform(1.5, 5.0))
        img += m * rng.uniform(-70, 70)
    img *= vignette(h, w)
    return norm255(img)


def photo_color(seed, h, w, detail=1.0, shapes=0, chroma=1.0):
    rng = np.random.default_rng(seed)
    luma = photo_gray(seed, h, w, detail=detail, shapes=shapes).astype(np.float64)
    cb = plasma(rng, h, w, [(max(h // 4, 8), 30), (24, 10 * detail), (8, 6 * detail)]) * chroma
    cr = plasma(rng, h, w, [(max(h // 4, 8), 30), (24, 10 * detail), (8, 6 * detail)]) * chroma
    r = luma + 1.402 * cr
    g = luma - 0.344 * cb - 0.714 * cr
    b = luma + 1.772 * cb
    return np.stack([np.clip(r, 0, 255), np.clip(g, 0, 255), np.clip(b, 0, 255)],
                    axis=-1).astype(np.uint8)



def add_blockvar(img, seed, bn):
    """Noise whose variance changes independently per 8x8 block: photographs
    carry abrupt local-activity changes that smooth synthetic fields lack."""
    if bn <= 0:
        return img
    rng = np.random.default_rng(seed + 1000)
    h, w = img.shape[:2]
    amp = rng.uniform(0.0, 1.0, (h // 8 + 1, w // 8 + 1)) ** 2
    amp = np.kron(amp, np.ones((8, 8)))[:h, :w]
    if img.ndim == 3:
        amp = amp[:, :, None]
        noise = rng.standard_normal(img.shape)
    else:
        noise = rng.standard_normal((h, w))
    return np.clip(img.astype(np.float64) + noise * amp * bn, 0, 255).astype(np.uint8)


def encode_size(img, q, sub):
    buf = io.BytesIO()
    Image.fromarray(img).save(buf, "JPEG", quality=q, subsampling=sub, optimize=True)
    return buf.tell()


def save_matched(img, name, target_bytes, sub):
    """Pick the quality whose encoded size is closest to target_bytes."""
    best_q, best_err = 75, None
    for q in range(75, 100):
        err = abs(encode_size(img, q, sub) - target_bytes)
        if best_err is None or err < best_err:
            best_q, best_err = q, err
    path = os.path.join(OUT, name)
    Image.fromarray(img).save(path, "JPEG", quality=best_q, subsampling=sub, optimize=True)
    return best_q, os.path.getsize(path)


def save_cv2(img, name, quality, rst):
    path = os.path.join(OUT, name)
    flags = [cv2.IMWRITE_JPEG_QUALITY, quality, cv2.IMWRITE_JPEG_RST_INTERVAL, rst]
    ok = cv2.imwrite(path, img, flags)
    assert ok, name
    return path


def main():
    os.makedirs(OUT, exist_ok=True)
    os.makedirs(FIX, exist_ok=True)

    # name -> (seed, size, detail, shapes, color?, subsampling, classic file size)
    # name -> (seed, size, detail, shapes, color?, subsampling, block noise,
    #          classic file size)
    spec = {
        "cameraman": (11, 256, 1.6, 3, False, 0, 0, 50483),
        "cat": (12, 512, 1.35, 2, True, 2, 0, 105552),
        "house": (13, 256, 1.5, 6, False, 0, 0, 36002),
        "jetplane": (14, 512, 1.1, 4, False, 0, 0, 61553),
        "lake": (15, 512, 1.3, 2, False, 0, 0, 87217),
        "lena-color-256": (31, 256, 1.3, 2, True, 2, 0, 29309),
        "lena-color-512": (32, 512, 1.2, 2, True, 2, 0, 105733),
        "lena-grey-256": (16, 256, 1.4, 2, False, 0, 1, 21133),
        "lena-grey-512": (17, 512, 1.35, 2, False, 0, 0, 64762),
        "livingroom": (18, 512, 1.25, 5, False, 0, 0, 82420),
        "mandril-color": (33, 512, 2.2, 0, True, 2, 0, 247196),
        "mandril-grey": (19, 512, 1.6, 0, False, 0, 0, 88031),
        "peppers-color": (34, 512, 1.35, 5, True, 0, 7, 143447),
        "peppers-grey": (20, 512, 1.2, 5, False, 0, 0, 78743),
        "pirate": (21, 512, 1.45, 3, False, 0, 1, 80393),
        "walkbridge": (22, 512, 1.55, 1, False, 0, 0, 109050),
        "woman-blonde": (23, 512, 1.25, 2, False, 0, 0, 80295),
        "woman-darkhair": (24, 512, 1.0, 2, False, 0, 0, 45172),
    }
    for name, (seed, size, detail, shapes, is_color, sub, bn, target) in sorted(spec.items()):
        if is_color:
            img = photo_color(seed, size, size, detail, shapes)
        else:
            img = photo_gray(seed, size, size, detail, shapes)
        img = add_blockvar(img, seed, bn)
        q, sz = save_matched(img, name + ".jpg", target, sub)
        print(f"{name:18s} q={q} size={sz} target={target}")

    # in-the-wild files with restart markers, odd sizes, mixed content
    wild = [
        ("wild01-rst1", 41, (317, 211), 0.9, 1, 88, 1, False),
        ("wild02-rst2", 42, (600, 400), 1.1, 3, 90, 2, True),
        ("wild03-rst4", 43, (333, 333), 0.8, 2, 85, 4, False),
        ("wild04-rst8", 44, (512, 384), 1.0, 4, 92, 8, True),
        ("wild05-rst16", 45, (640, 480), 0.7, 2, 87, 16, True),
    ]
    for name, seed, (w, h), detail, shapes, q, rst, is_color in wild:
        if is_color:
            rgb = photo_color(seed, h, w, detail, shapes)
            save_cv2(rgb[:, :, ::-1], name + ".jpg", q, rst)  # BGR for cv2
        else:
            save_cv2(photo_gray(seed, h, w, detail, shapes), name + ".jpg", q, rst)

    # fixtures: valid JPEG features the re-compressor must reject cleanly
    prog = photo_gray(99, 128, 128, 0.8, 1)
    Image.fromarray(prog).save(os.path.join(FIX, "progressive.jpg"), "JPEG",
                               quality=85, progressive=True)

    total = sum(os.path.getsize(os.path.join(OUT, f)) for f in os.listdir(OUT))
    print(f"corpus total {total} bytes")


if __name__ == "__main__":
    main()
