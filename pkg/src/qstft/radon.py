"""Line subgroups of Z_n x Z_n, discrete Radon line sums and the directional transform.

Images are ``(n, n)`` arrays; pixel ``(i, j)`` is the group element ``(i, j)``,
which is also its row-major canonical index.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .dstft import TimeFreqFunction, analyze, reconstruct
from .errors import InvalidElementError
from .groups import FiniteGroup, Quotient, Subgroup, build_quotient, generate_subgroup
from .harmonic import GroupFunction, periodize


def plane(n: int) -> FiniteGroup:
    return FiniteGroup((int(n), int(n)))


def line_subgroup(n: int, d) -> Subgroup:
    """Cyclic line ``{t d mod n}`` through the origin."""
    d = tuple(int(x) % n for x in d)
    if len(d) != 2:
        raise InvalidElementError(f"direction must have two components, got {d}")
    if d == (0, 0):
        raise InvalidElementError("direction must be nonzero mod n")
    return generate_subgroup(plane(n), [d])


def directions(n: int) -> list:
    """All nonzero directions of ``Z_n^2`` up to generating the same line, first hit in lexicographic order."""
    seen, out = set(), []
    for a in range(n):
        for b in range(n):
            if (a, b) == (0, 0):
                continue
            key = tuple(line_subgroup(n, (a, b)).indices)
            if key not in seen:
                seen.add(key)
                out.append((a, b))
    return out


def line_quotient(n: int, d) -> Quotient:
    G = plane(n)
    return build_quotient(G, line_subgroup(n, d))


def image_function(image) -> GroupFunction:
    img = np.asarray(image)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise InvalidElementError(f"image must be square, got shape {img.shape}")
    return GroupFunction(plane(img.shape[0]), img.reshape(-1))


def discrete_radon(image, d) -> GroupFunction:
    """Sum of the image along every translate of the line through ``d``."""
    f = image_function(image)
    Q = line_quotient(f.domain.factors[0], d)
    return periodize(f, Q.subgroup, Q)


def line_sums_oracle(image, d) -> np.ndarray:
    """Independent double loop: for each coset representative, walk the line and add pixels."""
    img = np.asarray(image, dtype=np.complex128)
    n = img.shape[0]
    Q = line_quotient(n, d)
    a, b = (int(x) % n for x in d)
    step = n // math.gcd(a, b, n)  # length of the line
    out = []
    for r0, r1 in Q.elements:
        s = 0j
        for t in range(step):
            s += img[(r0 + t * a) % n, (r1 + t * b) % n]
        out.append(s)
    return np.array(out)


def directional_dstft(image, d, g: GroupFunction) -> TimeFreqFunction:
    f = image_function(image)
    Q = line_quotient(f.domain.factors[0], d)
    if g.domain != Q:
        raise InvalidElementError("window does not live on the quotient of this direction")
    return analyze(f, g)


def directional_oracle(image, d, g: GroupFunction) -> np.ndarray:
    """Unrolled sum ``sum_x f(x) conj(<x, w>) conj(g(coset(x - z)))`` with plain Python loops.

    Coset membership is decided by walking the line, not through the quotient tables.
    """
    img = np.asarray(image, dtype=np.complex128)
    n = img.shape[0]
    Q = g.domain
    a, b = (int(x) % n for x in d)
    line = {((t * a) % n, (t * b) % n) for t in range(n)}
    reps = [tuple(int(c) for c in r) for r in Q.elements]

    def coset(y):
        for k, (r0, r1) in enumerate(reps):
            if (((y[0] - r0) % n), ((y[1] - r1) % n)) in line:
                return k
        raise AssertionError("point in no coset")

    out = np.zeros((n * n, len(reps)), dtype=np.complex128)
    for w0 in range(n):
        for w1 in range(n):
            for zi, (z0, z1) in enumerate(reps):
                s = 0j
                for x0 in range(n):
                    for x1 in range(n):
                        chi = cmath.exp(2j * cmath.pi * (x0 * w0 + x1 * w1) / n)
                        gv = g.values[coset(((x0 - z0) % n, (x1 - z1) % n))]
                        s += img[x0, x1] * chi.conjugate() * gv.conjugate()
                out[w0 * n + w1, zi] = s
    return out


def reconstruct_image(image, g1: GroupFunction, g2: GroupFunction | None = None) -> np.ndarray:
    f = image_function(image)
    g2 = g1 if g2 is None else g2
    n = f.domain.factors[0]
    return reconstruct(f, g1, g2).values.reshape(n, n)

