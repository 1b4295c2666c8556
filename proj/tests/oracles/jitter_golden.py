"""Step-by-step ColorJitter reference (colorsys for HSV) for test_augment.cpp."""
import colorsys

from prng_golden import stream

W = (0.2989, 0.587, 0.114)
IMG = [(0.2, 0.5, 0.8), (0.9, 0.1, 0.3), (0.5, 0.5, 0.5), (1.0, 0.95, 0.0)]


def clamp(v):
    return min(1.0, max(0.0, v))


def jitter(img, b, c, s, h):
    x = [tuple(clamp(b * v) for v in px) for px in img]
    gray = [W[0] * p[0] + W[1] * p[1] + W[2] * p[2] for p in x]
    mu = sum(gray) / len(gray)
    x = [tuple(clamp(c * v + (1 - c) * mu) for v in px) for px in x]
    x = [tuple(clamp(s * v + (1 - s) * g) for v in px) for px, g in zip(x, gray)]
    out = []
    for px in x:
        hh, ss, vv = colorsys.rgb_to_hsv(*px)
        hh = (hh + h) % 1.0
        out.append(tuple(clamp(v) for v in colorsys.hsv_to_rgb(hh, ss, vv)))
    return out


def seeded_draw(seed):
    us = [(x >> 11) * 2.0**-53 for x in stream(seed, 0, 4)]
    ranges = [(0.9, 1.1), (0.95, 1.05), (0.9, 1.1), (-0.05, 0.05)]
    return [lo + (hi - lo) * u for (lo, hi), u in zip(ranges, us)]


if __name__ == "__main__":
    fixed = jitter(IMG, 1.07, 0.97, 1.05, 0.03)
    print("fixed:", ", ".join(repr(v) for px in fixed for v in px))
    d = seeded_draw(1234)
    print("seeded draw:", [repr(v) for v in d])
    print("seeded:", ", ".join(repr(v) for px in jitter(IMG, *d) for v in px))
