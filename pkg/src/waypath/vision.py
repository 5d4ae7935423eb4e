"""Lane-keeping image pipeline and overhead marker localization.

Images are 2-D ``uint8`` numpy arrays indexed ``img[v, h]``. The pipeline is
Canny edges -> region-of-interest mask -> Hough lines -> left/right lane
pairing -> midline -> single-iteration theta.
"""

from __future__ import annotations

import enum
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DetectionAmbiguityError, ImageTooSmallError, LaneLostError
from .geometry import ImagePoint, theta_single

GAUSS_SIZE = 5
GAUSS_SIGMA = 1.4

SOBEL_H = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=float)
SOBEL_V = SOBEL_H.T

ROBOT_CODE = 200
TARGET_CODE = 100
OBSTACLE_CODE = 255


def as_gray(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {arr.shape}")
    return arr


def gaussian_kernel(size: int = GAUSS_SIZE, sigma: float = GAUSS_SIGMA) -> np.ndarray:
    r = np.arange(size) - (size - 1) / 2
    g = np.exp(-(r**2) / (2 * sigma**2))
    k = np.outer(g, g)
    return k / k.sum()


def convolve(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """2-D convolution (kernel flipped) with edge-replicated borders."""
    kh, kw = kernel.shape
    padded = np.pad(img.astype(float), ((kh // 2, kh // 2), (kw // 2, kw // 2)), mode="edge")
    windows = sliding_window_view(padded, (kh, kw))
    return np.einsum("ijkl,kl->ij", windows, kernel[::-1, ::-1])


def gradients(img: np.ndarray):
    """Smoothed Sobel gradient magnitude (intensity per pixel) and direction (rad)."""
    smooth = convolve(img, gaussian_kernel())
    # flipped kernels so that g_h > 0 where intensity grows rightward
    g_h = convolve(smooth, SOBEL_H[:, ::-1])
    g_v = convolve(smooth, SOBEL_V[::-1, :])
    magnitude = np.hypot(g_h, g_v) / 8.0
    return magnitude, np.arctan2(g_v, g_h)


def non_max_suppression(magnitude: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Keep pixels that peak along the quantized gradient direction.

    Ties keep both pixels, so mirrored images give mirrored edge maps. The
    magnitude is rounded first so that equal values reached by different
    floating-point summation orders still compare equal.
    """
    angle = np.rad2deg(direction) % 180.0
    magnitude = np.round(magnitude, 9)
    m = np.pad(magnitude, 1, mode="constant")
    h, w = magnitude.shape
    centre = m[1:-1, 1:-1]

    def shifted(dv, dh):
        return m[1 + dv : 1 + dv + h, 1 + dh : 1 + dh + w]

    # (dv, dh) of the neighbour along +gradient for each 45 degree sector
    sectors = [
        ((angle < 22.5) | (angle >= 157.5), (0, 1)),
        ((angle >= 22.5) & (angle < 67.5), (1, 1)),
        ((angle >= 67.5) & (angle < 112.5), (1, 0)),
        ((angle >= 112.5) & (angle < 157.5), (1, -1)),
    ]
    keep = np.zeros_like(magnitude, dtype=bool)
    for mask, (dv, dh) in sectors:
        ahead = shifted(dv, dh)
        behind = shifted(-dv, -dh)
        keep |= mask & (centre >= ahead) & (centre >= behind) & (centre > 0)
    return np.where(keep, magnitude, 0.0)


_OFFSETS_8 = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
_OFFSETS_4 = [(-1, 0), (0, -1), (0, 1), (1, 0)]


def label_components(mask: np.ndarray, connectivity: int = 8) -> List[np.ndarray]:
    """Connected components of a boolean mask by breadth-first search.

    Returns one ``(n, 2)`` array of ``(v, h)`` coordinates per component,
    ordered by the first pixel met in row-major scan.
    """
    offsets = _OFFSETS_8 if connectivity == 8 else _OFFSETS_4
    rows, cols = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    components = []
    for v0, h0 in zip(*np.nonzero(mask)):
        if seen[v0, h0]:
            continue
        seen[v0, h0] = True
        queue = deque([(int(v0), int(h0))])
        pixels = []
        while queue:
            v, h = queue.popleft()
            pixels.append((v, h))
            for dv, dh in offsets:
                nv, nh = v + dv, h + dh
                if 0 <= nv < rows and 0 <= nh < cols and mask[nv, nh] and not seen[nv, nh]:
                    seen[nv, nh] = True
                    queue.append((nv, nh))
        components.append(np.array(pixels, dtype=int))
    return components


def hysteresis(magnitude: np.ndarray, low: float, high: float) -> np.ndarray:
    candidates = magnitude >= low
    out = np.zeros(magnitude.shape, dtype=np.uint8)
    if not candidates.any():
        return out
    strong = magnitude >= high
    for comp in label_components(candidates, connectivity=8):
        if strong[comp[:, 0], comp[:, 1]].any():
            out[comp[:, 0], comp[:, 1]] = 255
    return out


def canny(img, low: float = 20.0, high: float = 50.0) -> np.ndarray:
    """Binary edge map (0/255) of a grayscale image.

    Gaussian blur (5x5, sigma 1.4), Sobel gradients, non-maximum suppression
    and 8-connected hysteresis between ``low`` and ``high``. Thresholds are in
    intensity-per-pixel units of the smoothed image.
    """
    img = as_gray(img)
    if not 0 <= low < high <= 255:
        raise ValueError(f"need 0 <= low < high <= 255, got low={low}, high={high}")
    if img.shape[0] < GAUSS_SIZE or img.shape[1] < GAUSS_SIZE:
        raise ImageTooSmallError(f"image {img.shape[1]}x{img.shape[0]} is smaller than the {GAUSS_SIZE}x{GAUSS_SIZE} kernel")
    magnitude, direction = gradients(img)
    return hysteresis(non_max_suppression(magnitude, direction), low, high)


# -- region of interest -----------------------------------------------------


def polygon_mask(shape, vertices: Sequence[ImagePoint]) -> np.ndarray:
    """Pixels whose centre ``(h + 0.5, v + 0.5)`` falls inside the polygon.

    Even-odd crossing rule; zero-area polygons therefore contain nothing.
    """
    if len(vertices) < 3:
        raise ValueError(f"ROI polygon needs at least 3 vertices, got {len(vertices)}")
    rows, cols = shape
    ph = np.arange(cols)[None, :] + 0.5
    pv = np.arange(rows)[:, None] + 0.5
    inside = np.zeros(shape, dtype=bool)
    pts = [(float(p[0]), float(p[1])) for p in vertices]
    for (h1, v1), (h2, v2) in zip(pts, pts[1:] + pts[:1]):
        if v1 == v2:
            continue
        straddles = (v1 > pv) != (v2 > pv)
        h_cross = h1 + (pv - v1) * (h2 - h1) / (v2 - v1)
        inside ^= straddles & (ph < h_cross)
    return inside


def apply_roi(img, roi: Sequence[ImagePoint]) -> np.ndarray:
    img = as_gray(img)
    return np.where(polygon_mask(img.shape, roi), img, 0).astype(img.dtype)


def default_roi(width: int, height: int) -> List[ImagePoint]:
    """Trapezoid over the lower 60% of the frame."""
    top = 0.4 * height
    return [
        ImagePoint(0.0, float(height)),
        ImagePoint(0.1 * width, top),
        ImagePoint(0.9 * width, top),
        ImagePoint(float(width), float(height)),
    ]


# -- Hough transform --------------------------------------------------------


@dataclass(frozen=True)
class HoughLine:
    """A detected line ``rho = h cos(theta) + v sin(theta)``.

    ``rho``/``theta_line`` are accumulator cell centres; ``top``/``bottom``
    are the extent of the supporting edge pixels along a least-squares fit.
    """

    rho: float
    theta_line: float
    votes: int
    top: ImagePoint
    bottom: ImagePoint


def hough_accumulator(edges: np.ndarray, rho_res: float = 1.0, theta_res: float = 1.0):
    """Vote array of shape (n_theta, n_rho) plus the theta and rho bin centres."""
    rows, cols = edges.shape
    k = int(math.ceil(math.hypot(rows, cols) / rho_res))
    thetas = np.arange(0.0, 180.0, theta_res)
    rhos = np.arange(-k, k + 1) * rho_res
    vs, hs = np.nonzero(edges)
    acc = np.zeros((len(thetas), len(rhos)), dtype=np.int64)
    if len(vs):
        rad = np.deg2rad(thetas)
        rho = hs[:, None] * np.cos(rad)[None, :] + vs[:, None] * np.sin(rad)[None, :]
        r_idx = np.rint(rho / rho_res).astype(np.int64) + k
        flat = np.arange(len(thetas))[None, :] * len(rhos) + r_idx
        acc = np.bincount(flat.ravel(), minlength=acc.size).reshape(acc.shape)
    return acc, thetas, rhos


def _fit_segment(hs: np.ndarray, vs: np.ndarray, shape):
    pts = np.column_stack([hs, vs]).astype(float)
    centre = pts.mean(axis=0)
    cov = np.cov((pts - centre).T) if len(pts) > 1 else np.eye(2)
    evals, evecs = np.linalg.eigh(cov)
    d = evecs[:, np.argmax(evals)]
    t = (pts - centre) @ d
    ends = [centre + t.min() * d, centre + t.max() * d]
    rows, cols = shape
    ends = [ImagePoint(float(np.clip(e[0], 0, cols - 1)), float(np.clip(e[1], 0, rows - 1))) for e in ends]
    ends.sort(key=lambda p: (p.v, p.h))
    return ends[0], ends[1]


def hough_lines(
    edges,
    rho_res: float = 1.0,
    theta_res: float = 1.0,
    min_votes: Optional[int] = None,
    nms_rho: float = 8.0,
    nms_theta: float = 8.0,
    fit_band: float = 5.0,
    max_lines: Optional[int] = None,
) -> List[HoughLine]:
    """Lines in a binary edge map, strongest first.

    Peaks are taken greedily from the accumulator; a cell within
    ``nms_rho`` px and ``nms_theta`` degrees of an accepted peak (including
    across the 0/180 degree seam, where rho changes sign) is suppressed.
    ``min_votes`` defaults to 30% of the image height.
    """
    edges = as_gray(edges)
    rows, cols = edges.shape
    if min_votes is None:
        min_votes = max(1, int(round(0.3 * rows)))
    acc, thetas, rhos = hough_accumulator(edges, rho_res, theta_res)
    n_theta, n_rho = acc.shape
    t_idx, r_idx = np.nonzero(acc >= min_votes)
    if len(t_idx) == 0:
        return []
    votes = acc[t_idx, r_idx]
    order = np.lexsort((r_idx, t_idx, -votes))
    t_idx, r_idx, votes = t_idx[order], r_idx[order], votes[order]

    wt = nms_theta / theta_res
    wr = nms_rho / rho_res
    alive = np.ones(len(t_idx), dtype=bool)
    vs, hs = np.nonzero(edges)
    lines = []
    for i in range(len(t_idx)):
        if not alive[i]:
            continue
        ti, ri = t_idx[i], r_idx[i]
        dt = np.abs(t_idx - ti)
        near = (dt <= wt) & (np.abs(r_idx - ri) <= wr)
        # across the seam theta -> theta - 180 flips the sign of rho
        near |= (n_theta - dt <= wt) & (np.abs(r_idx - (n_rho - 1 - ri)) <= wr)
        alive &= ~near

        theta = float(thetas[ti])
        rho = float(rhos[ri])
        rad = math.radians(theta)
        resid = np.abs(hs * math.cos(rad) + vs * math.sin(rad) - rho)
        band = resid <= max(fit_band, rho_res)
        top, bottom = _fit_segment(hs[band], vs[band], edges.shape)
        lines.append(HoughLine(rho, theta, int(votes[i]), top, bottom))
        if max_lines is not None and len(lines) >= max_lines:
            break
    return lines


# -- lanes ------------------------------------------------------------------


class Segment(NamedTuple):
    top: ImagePoint
    bottom: ImagePoint


@dataclass(frozen=True)
class LaneObservation:
    left: Segment
    right: Segment
    midline: Segment
    degraded: bool = False


def _h_at(seg: Segment, v: float) -> float:
    (h1, v1), (h2, v2) = seg
    if v2 == v1:
        return (h1 + h2) / 2
    return h1 + (v - v1) * (h2 - h1) / (v2 - v1)


def _resample(seg: Segment, v_top: float, v_bottom: float) -> Segment:
    return Segment(ImagePoint(_h_at(seg, v_top), v_top), ImagePoint(_h_at(seg, v_bottom), v_bottom))


def extract_lanes(
    lines: Sequence[HoughLine],
    img_width: int,
    img_height: Optional[int] = None,
    previous: Optional[LaneObservation] = None,
    min_tilt_deg: float = 20.0,
) -> LaneObservation:
    """Pair the strongest left-half and right-half lines into a lane.

    A line's side is decided by where it meets the bottom row. Lines within
    ``min_tilt_deg`` of horizontal are ignored. When one side is missing the
    matching segment of ``previous`` is reused and the result is flagged
    ``degraded``; with no previous observation :class:`LaneLostError` is raised.
    """
    if img_height is None:
        img_height = int(max((ln.bottom.v for ln in lines), default=0)) + 1
    bottom_row = img_height - 1
    centre = img_width / 2
    best = {"left": None, "right": None}
    for ln in sorted(lines, key=lambda ln: (-ln.votes, ln.rho, ln.theta_line)):
        dh = ln.bottom.h - ln.top.h
        dv = ln.bottom.v - ln.top.v
        if dv <= 0 or math.degrees(math.atan2(dv, abs(dh))) < min_tilt_deg:
            continue
        side = "left" if _h_at(Segment(ln.top, ln.bottom), bottom_row) < centre else "right"
        if best[side] is None:
            best[side] = Segment(ln.top, ln.bottom)

    degraded = False
    for side in ("left", "right"):
        if best[side] is None:
            if previous is None:
                raise LaneLostError(f"no {side} lane line detected and no previous observation")
            best[side] = getattr(previous, side)
            degraded = True

    left, right = best["left"], best["right"]
    v_top = max(left.top.v, right.top.v)
    v_bottom = min(left.bottom.v, right.bottom.v)
    if v_top >= v_bottom:
        v_top = min(left.top.v, right.top.v)
        v_bottom = max(left.bottom.v, right.bottom.v)
    left = _resample(left, v_top, v_bottom)
    right = _resample(right, v_top, v_bottom)
    midline = Segment(
        ImagePoint((left.top.h + right.top.h) / 2, v_top),
        ImagePoint((left.bottom.h + right.bottom.h) / 2, v_bottom),
    )
    return LaneObservation(left, right, midline, degraded)


@dataclass
class LaneFrame:
    edges: np.ndarray
    lines: List[HoughLine]
    lanes: LaneObservation
    theta: float


def process_frame(
    img,
    roi: Optional[Sequence[ImagePoint]] = None,
    low: float = 20.0,
    high: float = 50.0,
    previous: Optional[LaneObservation] = None,
    **hough_kw,
) -> LaneFrame:
    """Run the full lane-keep pipeline on one frame."""
    img = as_gray(img)
    rows, cols = img.shape
    edges = canny(img, low, high)
    edges = apply_roi(edges, roi if roi is not None else default_roi(cols, rows))
    lines = hough_lines(edges, **hough_kw)
    lanes = extract_lanes(lines, cols, rows, previous=previous)
    return LaneFrame(edges, lines, lanes, theta_single(lanes.midline.top, lanes.midline.bottom))


def draw_overlay(img, frame: LaneFrame) -> np.ndarray:
    """Grayscale copy of ``img`` with the lane lines (200) and midline (255) drawn."""
    out = np.array(as_gray(img), dtype=np.uint8, copy=True) // 2
    lanes = frame.lanes
    for seg, value in ((lanes.left, 200), (lanes.right, 200), (lanes.midline, 255)):
        draw_segment(out, seg.top, seg.bottom, value)
    return out


def draw_segment(img: np.ndarray, p, q, value: int, width: int = 1) -> None:
    """Rasterize a segment in place by dense sampling (deterministic)."""
    rows, cols = img.shape
    n = int(math.ceil(max(abs(q[0] - p[0]), abs(q[1] - p[1])) * 2)) + 1
    t = np.linspace(0.0, 1.0, n)
    hs = np.floor(p[0] + t * (q[0] - p[0]) + 0.5).astype(int)
    vs = np.floor(p[1] + t * (q[1] - p[1]) + 0.5).astype(int)
    half = width // 2
    for off in range(-half, width - half):
        hh = hs + off
        ok = (hh >= 0) & (hh < cols) & (vs >= 0) & (vs < rows)
        img[vs[ok], hh[ok]] = value


# -- overhead markers -------------------------------------------------------


class BlobLabel(enum.Enum):
    ROBOT = "robot"
    TARGET = "target"


@dataclass(frozen=True)
class BlobDetection:
    centroid: ImagePoint
    pixel_count: int
    label: BlobLabel

    def to_record(self) -> dict:
        return {"label": self.label.value, "h": self.centroid.h, "v": self.centroid.v, "pixel_count": self.pixel_count}


def detect_blobs(
    img,
    codes: Optional[dict] = None,
    min_pixels: int = 4,
) -> List[BlobDetection]:
    """Locate the robot and target markers in an overhead render.

    Markers are connected regions painted with reserved intensities
    (robot 200, target 100). Exactly one blob of at least ``min_pixels``
    pixels must exist per label; results are ordered robot, target.
    """
    img = as_gray(img)
    if codes is None:
        codes = {BlobLabel.ROBOT: ROBOT_CODE, BlobLabel.TARGET: TARGET_CODE}
    found = []
    for label, code in codes.items():
        blobs = [c for c in label_components(img == code, connectivity=8) if len(c) >= min_pixels]
        if len(blobs) != 1:
            raise DetectionAmbiguityError(f"expected exactly one {label.value} marker, found {len(blobs)}")
        comp = blobs[0]
        centroid = ImagePoint(float(comp[:, 1].mean()), float(comp[:, 0].mean()))
        found.append(BlobDetection(centroid, len(comp), label))
    return found


def detections_to_json(detections: Sequence[BlobDetection]) -> str:
    return json.dumps([d.to_record() for d in detections], indent=2)
