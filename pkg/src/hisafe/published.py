"""Published cost-table rows used for side-by-side comparison.

Each row is (n, l, n1, p1, ceil_log_p1, latency, R, C_T, C_T reduction %,
C_u, C_u reduction %), with ``None`` for the baseline (l = 1) reductions.
Values are transcribed as printed, including entries that are not
self-consistent (e.g. non-prime p1 = 51, 81, 91).
"""

from __future__ import annotations

from typing import NamedTuple


class PublishedRow(NamedTuple):
    n: int
    l: int
    n1: int
    p1: int
    bits: int
    latency: int
    R: int
    C_T: int
    reduction_total: float | None
    C_u: int
    reduction_user: float | None


COST_TABLE: tuple[PublishedRow, ...] = tuple(
    PublishedRow(*row)
    for row in (
        (12, 1, 12, 13, 4, 3, 18, 72, None, 72, None),
        (12, 2, 6, 7, 3, 2, 10, 60, 16.7, 30, 58.3),
        (12, 3, 4, 5, 3, 2, 6, 54, 25.0, 18, 75.0),
        (12, 4, 3, 5, 3, 2, 4, 48, 33.3, 12, 83.3),
        (15, 1, 15, 17, 5, 4, 18, 90, None, 90, None),
        (15, 3, 5, 7, 3, 2, 8, 48, 46.7, 24, 73.3),
        (15, 5, 3, 5, 3, 2, 4, 60, 33.3, 12, 86.7),
        (16, 1, 16, 17, 5, 4, 20, 100, None, 100, None),
        (16, 2, 8, 11, 4, 3, 14, 112, -12.0, 56, 44.0),
        (16, 4, 4, 5, 3, 2, 6, 72, 28.0, 18, 82.0),
        (20, 1, 20, 23, 5, 4, 32, 160, None, 160, None),
        (20, 2, 10, 11, 4, 3, 16, 128, 20.0, 64, 60.0),
        (20, 4, 5, 7, 3, 2, 8, 96, 40.0, 24, 85.0),
        (20, 5, 4, 5, 3, 2, 6, 90, 43.8, 18, 88.7),
        (24, 1, 24, 29, 5, 4, 40, 200, None, 200, None),
        (24, 2, 12, 13, 4, 3, 18, 144, 28.0, 72, 64.0),
        (24, 3, 8, 11, 4, 3, 14, 168, 16.0, 56, 72.0),
        (24, 4, 6, 7, 3, 2, 10, 120, 40.0, 30, 85.0),
        (24, 6, 4, 7, 3, 2, 6, 108, 46.0, 18, 91.0),
        (24, 8, 3, 5, 3, 2, 4, 96, 52.0, 12, 94.0),
        (28, 1, 28, 29, 5, 4, 40, 200, None, 200, None),
        (28, 2, 14, 17, 5, 4, 22, 220, -10.0, 110, 45.0),
        (28, 4, 7, 11, 4, 3, 14, 224, -12.0, 56, 72.0),
        (28, 7, 4, 5, 3, 2, 6, 126, 37.0, 18, 91.0),
        (30, 1, 30, 31, 5, 4, 38, 190, None, 190, None),
        (30, 2, 15, 17, 4, 3, 20, 200, -5.3, 100, 47.4),
        (30, 3, 10, 11, 4, 3, 16, 192, -1.1, 64, 66.3),
        (30, 5, 6, 7, 3, 2, 10, 150, 21.1, 30, 84.2),
        (30, 6, 5, 7, 3, 2, 8, 144, 24.2, 24, 87.4),
        (30, 10, 3, 5, 3, 2, 4, 120, 36.8, 12, 93.7),
        (36, 1, 36, 37, 6, 5, 46, 276, None, 276, None),
        (36, 2, 18, 19, 5, 4, 26, 260, 5.8, 130, 52.9),
        (36, 3, 12, 13, 4, 3, 18, 216, 21.7, 72, 73.9),
        (36, 4, 9, 11, 4, 3, 14, 224, 18.8, 56, 79.7),
        (36, 6, 6, 7, 3, 2, 10, 180, 34.8, 30, 89.1),
        (36, 9, 4, 5, 3, 2, 6, 162, 41.3, 18, 93.5),
        (36, 12, 3, 5, 3, 2, 4, 144, 47.8, 12, 95.7),
        (40, 1, 40, 41, 6, 5, 48, 288, None, 288, None),
        (40, 2, 20, 23, 5, 4, 32, 320, -11.1, 160, 44.4),
        (40, 4, 10, 11, 4, 3, 16, 256, 11.1, 64, 77.8),
        (40, 5, 8, 11, 4, 3, 14, 280, 2.8, 56, 80.6),
        (40, 8, 5, 7, 3, 2, 8, 192, 33.3, 24, 91.7),
        (40, 10, 4, 5, 3, 2, 6, 180, 37.5, 18, 93.8),
        (50, 1, 50, 51, 6, 5, 60, 360, None, 360, None),
        (50, 2, 25, 29, 5, 4, 34, 340, 5.6, 170, 52.8),
        (50, 5, 10, 11, 4, 3, 16, 320, 11.1, 64, 82.2),
        (50, 10, 5, 7, 3, 2, 8, 240, 33.3, 24, 93.3),
        (60, 1, 60, 61, 6, 5, 72, 432, None, 432, None),
        (60, 2, 30, 31, 5, 4, 38, 380, 12.0, 190, 56.0),
        (60, 3, 20, 23, 5, 3, 32, 480, -11.1, 160, 63.0),
        (60, 5, 12, 13, 4, 3, 18, 360, 16.7, 72, 83.3),
        (60, 6, 10, 11, 4, 2, 16, 384, 11.1, 64, 85.2),
        (60, 10, 6, 7, 3, 2, 10, 300, 30.6, 30, 93.1),
        (60, 12, 5, 7, 3, 2, 8, 288, 33.3, 24, 94.4),
        (60, 20, 3, 5, 3, 2, 4, 240, 44.4, 12, 97.2),
        (70, 1, 70, 71, 7, 6, 84, 588, None, 588, None),
        (70, 2, 35, 37, 6, 5, 44, 528, 10.2, 264, 55.1),
        (70, 5, 14, 17, 5, 4, 22, 550, 6.5, 110, 81.3),
        (70, 7, 10, 11, 4, 3, 16, 448, 23.8, 64, 89.1),
        (70, 10, 7, 11, 4, 3, 14, 560, 4.8, 56, 90.5),
        (70, 14, 5, 7, 3, 3, 8, 336, 42.9, 24, 95.9),
        (80, 1, 80, 81, 7, 6, 92, 644, None, 644, None),
        (80, 2, 40, 41, 6, 5, 48, 576, 10.6, 288, 55.3),
        (80, 4, 20, 23, 5, 4, 32, 640, 0.6, 160, 75.2),
        (80, 5, 16, 17, 5, 4, 20, 500, 22.4, 100, 84.5),
        (80, 8, 10, 11, 4, 3, 16, 512, 20.6, 64, 90.1),
        (80, 10, 8, 11, 4, 3, 14, 560, 13.0, 56, 91.3),
        (80, 16, 5, 7, 3, 2, 8, 384, 40.4, 24, 96.3),
        (80, 20, 4, 5, 3, 2, 6, 360, 44.1, 18, 97.2),
        (90, 1, 90, 91, 7, 6, 104, 728, None, 728, None),
        (90, 2, 45, 47, 6, 5, 54, 648, 11.0, 324, 55.5),
        (90, 3, 30, 31, 5, 4, 38, 570, 21.7, 190, 73.9),
        (90, 5, 18, 19, 5, 4, 26, 650, 10.7, 130, 82.1),
        (90, 6, 15, 17, 5, 4, 18, 540, 25.8, 90, 87.6),
        (90, 9, 10, 11, 4, 3, 16, 576, 20.9, 64, 91.2),
        (90, 10, 9, 11, 4, 3, 14, 560, 23.1, 56, 92.3),
        (90, 15, 6, 7, 3, 2, 10, 450, 38.2, 30, 95.9),
        (90, 18, 5, 7, 3, 2, 8, 432, 40.7, 24, 96.7),
        (90, 30, 3, 5, 3, 2, 4, 360, 50.5, 12, 98.4),
        (100, 1, 100, 101, 7, 6, 114, 798, None, 798, None),
        (100, 2, 50, 51, 6, 5, 60, 720, 9.8, 360, 54.9),
        (100, 4, 25, 29, 5, 4, 34, 680, 14.8, 170, 78.7),
        (100, 5, 20, 23, 5, 4, 32, 800, -0.3, 160, 79.9),
        (100, 10, 10, 11, 4, 3, 16, 640, 19.8, 64, 92.0),
        (100, 20, 5, 7, 3, 2, 8, 480, 39.9, 24, 97.0),
        (100, 25, 4, 5, 3, 2, 6, 450, 43.6, 18, 97.7),    )
)

# Optimal configurations: (n, l*, n1, latency, multiplications, C_T, %, C_u, %)
OPTIMAL_TABLE: tuple[tuple[int, int, int, int, int, int, float, int, float], ...] = (
    (24, 8, 3, 2, 4, 96, 52.0, 12, 94.0),
    (36, 12, 3, 2, 4, 144, 47.8, 12, 95.7),
    (60, 20, 3, 2, 4, 240, 44.4, 12, 97.2),
    (90, 30, 3, 2, 4, 360, 50.5, 12, 98.4),
    (100, 25, 4, 2, 6, 450, 43.6, 18, 97.7),
)

# Precomputed polynomials: (n, policy value, {exponent: coefficient}, p)
POLYNOMIAL_TABLE: tuple[tuple[int, str, dict[int, int], int], ...] = (
    (2, "minus", {2: 1, 1: 2, 0: 2}, 3),
    (2, "zero", {1: 2}, 3),
    (3, "minus", {3: 2, 1: 4}, 5),
    (3, "zero", {3: 2, 1: 4}, 5),
    (4, "minus", {4: 1, 3: 3, 1: 1, 0: 4}, 5),
    (4, "zero", {3: 3, 1: 1}, 5),
    (5, "minus", {5: 3, 3: 2, 1: 3}, 7),
    (5, "zero", {5: 3, 3: 2, 1: 3}, 7),
    (6, "minus", {6: 1, 5: 4, 3: 5, 1: 4, 0: 6}, 7),
    (6, "zero", {5: 4, 3: 5, 1: 4}, 7),
)


def published_rows(n: int) -> list[PublishedRow]:
    return [r for r in COST_TABLE if r.n == n]


def published_R(n: int, l: int) -> int | None:
    for r in COST_TABLE:
        if r.n == n and r.l == l:
            return r.R
    return None
