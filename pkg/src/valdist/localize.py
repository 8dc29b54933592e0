"""Argument-principle root counting, certified enclosures, and the
shift-and-localize root-witness pipeline.

Counting integrates p'/p (minus q'/q for poles) around region boundaries
with the trapezoid rule, doubling resolution until the value snaps to the
same integer at two consecutive resolutions. Localization is a quadtree
on boxes: a box whose subdivision line would pass through a root is
re-split at a pseudo-randomly perturbed point, so children always tile
their parent exactly and counts stay conserved. Once a box is small, a
Newton endgame polishes the root and certifies a tiny disk around it by
an independent winding count.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import Polynomial, RationalFunction, TargetValue
from .errors import (
    BinomialShape,
    ConstantPolynomial,
    ContourTooClose,
    LocalizationFailed,
    QuadratureNotConverged,
    RootOnBoundary,
    SubdivisionDepthExceeded,
)

WINDING_START_NODES = 256
WINDING_MAX_NODES = 2**20
# a root closer than this (relative to region size) counts as "on" the contour
CONTOUR_BAND_REL = 1e-9
SNAP_MARGIN = 0.25
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")

    @property
    def size(self) -> float:
        return self.radius

    def contains(self, z: complex) -> bool:
        return abs(z - self.center) < self.radius


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by center and positive half-widths."""

    center: complex
    half_re: float
    half_im: float

    def __post_init__(self):
        if not (self.half_re > 0 and self.half_im > 0):
            raise ValueError("box half-widths must be positive")

    @classmethod
    def from_corners(cls, x_lo, x_hi, y_lo, y_hi) -> "Box":
        return cls(
            complex((x_lo + x_hi) / 2.0, (y_lo + y_hi) / 2.0),
            (x_hi - x_lo) / 2.0,
            (y_hi - y_lo) / 2.0,
        )

    @property
    def size(self) -> float:
        return max(self.half_re, self.half_im)

    @property
    def diameter(self) -> float:
        return 2.0 * math.hypot(self.half_re, self.half_im)

    @property
    def corners(self):
        cx, cy = self.center.real, self.center.imag
        return (cx - self.half_re, cx + self.half_re, cy - self.half_im, cy + self.half_im)

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            abs(z.real - self.center.real) <= self.half_re + pad
            and abs(z.imag - self.center.imag) <= self.half_im + pad
        )

    def split_at(self, sx: float, sy: float):
        x_lo, x_hi, y_lo, y_hi = self.corners
        return [
            Box.from_corners(x_lo, sx, y_lo, sy),
            Box.from_corners(sx, x_hi, y_lo, sy),
            Box.from_corners(x_lo, sx, sy, y_hi),
            Box.from_corners(sx, x_hi, sy, y_hi),
        ]


Region = Disk | Box


@dataclass(frozen=True)
class RootEnclosure:
    """Certified disk: its boundary winding count equals ``multiplicity``."""

    region: Disk
    multiplicity: int
    target: TargetValue = TargetValue.finite(0.0)

    @property
    def center(self) -> complex:
        return self.region.center

    @property
    def radius(self) -> float:
        return self.region.radius


def _inflate(region: Region, factor: float) -> Region:
    if isinstance(region, Disk):
        return Disk(region.center, region.radius * factor)
    return Box(region.center, region.half_re * factor, region.half_im * factor)


def _bounding_box(region: Region) -> Box:
    if isinstance(region, Box):
        return region
    return Box(region.center, region.radius, region.radius)


# float values below this multiple of the roundoff bound are recomputed
# in exact dyadic arithmetic before they feed a certificate
_RELIABLE_FACTOR = 64.0 * _EPS

_CIRCLE_CACHE: dict = {}
_SEGMENT_CACHE: dict = {}


def _unit_circle(n: int) -> np.ndarray:
    e = _CIRCLE_CACHE.get(n)
    if e is None:
        e = np.exp(2j * np.pi * np.arange(n) / n)
        _CIRCLE_CACHE[n] = e
    return e


def _unit_segment(m: int):
    cached = _SEGMENT_CACHE.get(m)
    if cached is None:
        t = np.linspace(0.0, 1.0, m + 1)
        w = np.full(m + 1, 1.0 / m)
        w[0] *= 0.5
        w[-1] *= 0.5
        cached = (t, w)
        _SEGMENT_CACHE[m] = cached
    return cached


def _eval_repaired(poly: Polynomial, z: np.ndarray) -> np.ndarray:
    """Vectorized Horner, with exact re-evaluation where roundoff dominates.

    Inside the roundoff halo of a multiple root the float value is pure
    noise; those nodes (detected against the |c_i||z|^i bound) are redone
    in exact dyadic arithmetic so winding certificates stay meaningful at
    arbitrarily small contour radii.
    """
    v = poly.eval_many(z)
    if poly.degree == 0:
        return v
    z_abs = np.abs(z)
    screen = _RELIABLE_FACTOR * poly.eval_magnitude_bound(complex(float(np.max(z_abs))))
    if float(np.min(np.abs(v))) > screen:
        return v
    bad = np.nonzero(np.abs(v) <= _RELIABLE_FACTOR * poly.bound_many(z_abs))[0]
    for i in bad:
        v[i] = poly.eval_exact(complex(z[i]))
    return v


class _ContourCounter:
    """Winding numbers of a fixed zero/pole pair over many regions.

    Derivatives are computed once; every contour evaluation is a pair of
    vectorized Horner passes per polynomial.
    """

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        self.num = num
        self.dnum = num.derivative()
        self.den = den if den is not None and den.degree > 0 else None
        self.dden = self.den.derivative() if self.den is not None else None

    def _sample(self, region: Region, n: int):
        if isinstance(region, Disk):
            e = _unit_circle(n)
            return region.center + region.radius * e, (region.radius / n) * e
        x_lo, x_hi, y_lo, y_hi = region.corners
        corners = [
            complex(x_lo, y_lo),
            complex(x_hi, y_lo),
            complex(x_hi, y_hi),
            complex(x_lo, y_hi),
        ]
        m = max(n // 4, 8)
        t, w_unit = _unit_segment(m)
        zs, ws = [], []
        for k in range(4):
            a, b = corners[k], corners[(k + 1) % 4]
            zs.append(a + (b - a) * t)
            ws.append(((b - a) / (2j * np.pi)) * w_unit)
        return np.concatenate(zs), np.concatenate(ws)

    def once(self, region: Region, n: int):
        """One trapezoid pass: (complex winding estimate, nearest-root estimate)."""
        z, w = self._sample(region, n)
        nv = _eval_repaired(self.num, z)
        dnv = _eval_repaired(self.dnum, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = dnv / nv
            dist = np.abs(nv) / np.abs(dnv)
        if self.den is not None:
            dv = _eval_repaired(self.den, z)
            ddv = _eval_repaired(self.dden, z)
            with np.errstate(divide="ignore", invalid="ignore"):
                g = g - ddv / dv
                dist = np.minimum(dist, np.abs(dv) / np.abs(ddv))
        if not np.all(np.isfinite(g.view(float))):
            return 0j, 0.0
        value = complex(np.sum(w * g))
        d = np.nanmin(dist)  # nan marks nodes where the derivative vanished
        d_est = math.inf if math.isnan(d) else float(d)
        return value, d_est

    def certified(
        self,
        region: Region,
        start_nodes: int = WINDING_START_NODES,
        max_nodes: int = WINDING_MAX_NODES,
    ) -> int:
        size = region.size
        delta = CONTOUR_BAND_REL * size
        n = start_nodes
        prev_k = None
        prev_ok = False
        min_d = math.inf
        while n <= max_nodes:
            value, d_est = self.once(region, n)
            min_d = min(min_d, d_est)
            if d_est < delta:
                raise ContourTooClose(
                    f"zero/pole within {d_est:.2e} of the contour (band {delta:.2e})"
                )
            k = int(round(value.real))
            ok = abs(value - k) < SNAP_MARGIN
            if ok and prev_ok and prev_k == k:
                return k
            prev_k, prev_ok = k, ok
            n *= 2
        if min_d < 1e-5 * size:
            raise ContourTooClose(f"persistent near-contour root (distance ~{min_d:.2e})")
        raise QuadratureNotConverged("winding estimate did not stabilize to an integer")


def winding_count(f, region: Region) -> int:
    """Number of zeros minus poles of f inside the region, with multiplicity."""
    if isinstance(f, Polynomial):
        f = RationalFunction.from_polynomial(f)
    if not f.reduced:
        f = f.reduce()
    return _ContourCounter(f.numerator, f.denominator).certified(region)


def _newton(p: Polynomial, dp: Polynomial, z: complex, multiplicity: int = 1, iters: int = 60):
    """Multiplicity-aware Newton refinement; returns (best z, |p(best)|, last step)."""
    best = z
    best_val = abs(p(z))
    step = math.inf
    for _ in range(iters):
        d = dp(z)
        if d == 0:
            break
        s = multiplicity * p(z) / d
        z = z - s
        step = abs(s)
        v = abs(p(z))
        if v < best_val:
            best, best_val = z, v
        if step <= 4.0 * _EPS * max(1.0, abs(z)):
            break
    return best, best_val, step


def _certified_with_retries(counter: _ContourCounter, region: Region, rng) -> tuple[Region, int]:
    """Certified winding over the region, inflating slightly past boundary roots."""
    for attempt in range(9):
        try:
            return region, counter.certified(region)
        except ContourTooClose:
            if attempt == 8:
                raise RootOnBoundary(
                    "a root stayed within the contour band after 8 perturbations"
                ) from None
            region = _inflate(region, 1.0 + 1e-7 * (0.5 + float(rng.random())))
    raise AssertionError("unreachable")


def _newton_exact(p, dp, z, multiplicity, iters=8):
    """Newton steps with exactly evaluated residuals; beats the float halo."""
    step = math.inf
    for _ in range(iters):
        dv = dp.eval_exact(z)
        if dv == 0:
            break
        pv = p.eval_exact(z)
        if pv == 0:
            return z, 0.0
        s = multiplicity * pv / dv
        z = z - s
        step = abs(s)
        if step <= 2.0 * _EPS * max(1.0, abs(z)):
            break
    return z, step


def _endgame(counter, p, dp, box, count, tol):
    """Polish the box's root cluster by Newton and certify a tiny disk."""
    z, _, step = _newton(p, dp, box.center, multiplicity=count)
    rho_min = 1e-13 * (1.0 + abs(z))
    if step > 8.0 * rho_min:
        # float Newton stagnated at the roundoff halo of a multiple root
        z, step = _newton_exact(p, dp, z, count)
    if step > 1e-8 * (1.0 + abs(z)):
        return None
    if not box.contains(z, pad=-1e-9 * box.size):
        return None
    rho = max(rho_min, 8.0 * step)
    for _ in range(2):
        if rho > 0.45 * tol:
            return None
        try:
            w = counter.certified(Disk(z, rho))
        except (ContourTooClose, QuadratureNotConverged):
            rho *= 64.0
            continue
        return RootEnclosure(Disk(z, rho), count) if w == count else None
    return None


def _children_counts(counter, box, count, rng):
    """Split into four tiles whose certified counts sum to the parent's."""
    cx, cy = box.center.real, box.center.imag
    for attempt in range(8):
        if attempt == 0:
            sx, sy = cx, cy
        else:
            sx = cx + float(rng.uniform(-0.2, 0.2)) * box.half_re
            sy = cy + float(rng.uniform(-0.2, 0.2)) * box.half_im
        children = box.split_at(sx, sy)
        try:
            counts = [counter.certified(ch) for ch in children]
        except (ContourTooClose, QuadratureNotConverged):
            continue
        if sum(counts) == count:
            return list(zip(children, counts))
    raise RootOnBoundary("could not place subdivision lines clear of the roots")


def _shrink_start(counter, box, count, floor_diameter=0.0):
    """Halve the starting box toward its roots while the count is unchanged.

    Cauchy bounds can overshoot the actual root spread by orders of
    magnitude; starting the quadtree at the right scale keeps roots away
    from subdivision edges in relative terms (and saves most of the
    descent). Halving is free certificate-wise: the count pins the roots.
    """
    for _ in range(60):
        if box.diameter <= max(floor_diameter, 8.0 * (1.0 + abs(box.center)) * _EPS):
            break
        candidate = Box(box.center, box.half_re / 2.0, box.half_im / 2.0)
        try:
            if counter.certified(candidate) != count:
                break
        except (ContourTooClose, QuadratureNotConverged):
            break
        box = candidate
    return box


def _isolate(counter, p, dp, box0, count0, tol, rng, max_boxes=50000):
    """Quadtree descent; returns (disk, multiplicity, already_certified) triples."""
    stack = [(box0, count0)]
    finals = []
    processed = 0
    while stack:
        box, count = stack.pop()
        if count == 0:
            continue
        processed += 1
        if processed > max_boxes:
            raise SubdivisionDepthExceeded("subdivision budget exhausted")
        if box.diameter <= tol:
            finals.append((Disk(box.center, 0.5 * box.diameter), count, False))
            continue
        gate = 0.05 if count == 1 else 1e-3
        if box.diameter <= gate * (1.0 + abs(box.center)):
            enc = _endgame(counter, p, dp, box, count, tol)
            if enc is not None:
                finals.append((enc.region, enc.multiplicity, True))
                continue
        if box.diameter <= 256.0 * _EPS * max(1.0, abs(box.center)):
            raise SubdivisionDepthExceeded("box below float resolution before reaching tol")
        stack.extend(_children_counts(counter, box, count, rng))
    return finals


def _cover(d1: Disk, d2: Disk) -> Disk:
    delta = d2.center - d1.center
    dist = abs(delta)
    if dist + d2.radius <= d1.radius:
        return d1
    if dist + d1.radius <= d2.radius:
        return d2
    r = 0.5 * (dist + d1.radius + d2.radius)
    return Disk(d1.center + delta * ((r - d1.radius) / dist), r)


def _merge_certify(counter, finals, rng, target: TargetValue):
    """Merge overlapping disks, then certify every non-endgame disk."""
    items = list(finals)
    merged = True
    while merged:
        merged = False
        i = 0
        while i < len(items):
            j = i + 1
            while j < len(items):
                d1, m1, _ = items[i]
                d2, m2, _ = items[j]
                pad = 1e-12 * max(1.0, abs(d1.center))
                if abs(d1.center - d2.center) <= d1.radius + d2.radius + pad:
                    items[i] = (_cover(d1, d2), m1 + m2, False)
                    items.pop(j)
                    merged = True
                else:
                    j += 1
            i += 1
    out = []
    for disk, mult, certified in items:
        if not certified:
            region, w = _certified_with_retries(counter, disk, rng)
            if w != mult:
                raise LocalizationFailed(
                    f"enclosure winding {w} != accumulated multiplicity {mult}"
                )
            disk = region
        out.append(RootEnclosure(disk, mult, target))
    return out


def localize_roots(p: Polynomial, region: Region, tol: float, *, seed: int = 0):
    """Certified, pairwise-disjoint root enclosures of p inside the region.

    Enclosure disks have radius <= tol, each disk's winding count equals
    its multiplicity, and the multiplicities sum to the winding count of
    the whole region. Root clusters tighter than tol come back as a single
    enclosure with the summed multiplicity.
    """
    if p.degree == 0:
        raise ConstantPolynomial("cannot localize roots of a constant polynomial")
    if not tol > 0:
        raise ValueError("tol must be positive")
    rng = np.random.default_rng(seed)
    counter = _ContourCounter(p)
    region_eff, total = _certified_with_retries(counter, region, rng)
    if total == 0:
        return []
    box0 = _bounding_box(region_eff)
    if isinstance(region_eff, Box):
        box_total = total
    else:
        box0, box_total = _certified_with_retries(counter, box0, rng)
    box0 = _shrink_start(counter, box0, box_total)
    finals = None
    for _ in range(3):
        try:
            finals = _isolate(counter, p, counter.dnum, box0, box_total, tol, rng)
            break
        except RootOnBoundary:
            # an interior split line pinned a root through inherited edges;
            # fresh pseudo-random offsets re-randomize the whole tree
            continue
    if finals is None:
        finals = _isolate(counter, p, counter.dnum, box0, box_total, tol, rng)
    encs = _merge_certify(counter, finals, rng, TargetValue.finite(0.0))
    if isinstance(region_eff, Disk):
        encs = [e for e in encs if region_eff.contains(e.center)]
    got = sum(e.multiplicity for e in encs)
    if got != total:
        raise LocalizationFailed(f"enclosures hold {got} roots, the region holds {total}")
    encs.sort(key=lambda e: (e.center.real, e.center.imag))
    return encs


# -- the induction pipeline ----------------------------------------------------------


@dataclass(frozen=True)
class WitnessLevel:
    """Outcome of one induction level (outermost polynomial first)."""

    shift: complex
    kind: str  # "claim1" | "binomial" | "constant-term-zero"
    linear_ratio: float  # |coefficient of z| / coefficient scale after the shift
    decomposition: object | None = None


@dataclass(frozen=True)
class WitnessTrace:
    depth: int
    shifts: list
    claim1_checks: list
    witness: complex
    residual: float


def _cauchy_radius(p: Polynomial) -> float:
    rest = max(abs(c) for c in p.coefficients[:-1])
    return 1.0 + rest / abs(p.leading)


def _quadratic_root(p: Polynomial) -> complex:
    """Numerically stable quadratic root (sign-adjusted to avoid cancellation)."""
    c0, c1, c2 = p.coefficients
    s = cmath.sqrt(c1 * c1 - 4.0 * c2 * c0)
    if (c1.conjugate() * s).real < 0.0:
        s = -s
    q = -0.5 * (c1 + s)
    if q == 0:
        return 0j  # both roots at the origin
    r1, r2 = q / c2, c0 / q
    return min(r1, r2, key=lambda z: (z.real, z.imag))


def _localize_one_root(p: Polynomial, rng, bias: complex = 0j) -> complex:
    """One certified root of p inside its Cauchy disk.

    Descends into the nonzero-count child nearest ``bias``; callers pick
    the bias so that the best-conditioned root comes back (the witness
    pipeline aims at the smallest final witness modulus).
    """
    counter = _ContourCounter(p)
    dp = counter.dnum
    radius = _cauchy_radius(p) * (1.0 + 1e-9)
    box0, count0 = _certified_with_retries(counter, Box(0j, radius, radius), rng)
    if count0 == 0:
        raise LocalizationFailed("no roots inside the Cauchy bound")
    box0 = _shrink_start(counter, box0, count0)
    last = None
    for _ in range(3):
        box, count = box0, count0
        try:
            for _ in range(400):
                gate = 0.05 if count == 1 else 1e-3
                if box.diameter <= gate * (1.0 + abs(box.center)):
                    enc = _endgame(counter, p, dp, box, count, tol=box.diameter)
                    if enc is not None:
                        return enc.center
                if box.diameter <= 1e-11 * (1.0 + abs(box.center)):
                    return box.center  # cluster tighter than any useful tolerance
                children = _children_counts(counter, box, count, rng)
                children = [bc for bc in children if bc[1] > 0]
                box, count = min(children, key=lambda bc: abs(bc[0].center - bias))
            raise SubdivisionDepthExceeded("single-root descent did not terminate")
        except RootOnBoundary as exc:
            last = exc  # restart with fresh split offsets
    raise last


def _witness_recurse(p: Polynomial, rng, levels: list) -> complex:
    deg = p.degree
    if deg == 1:
        c0, c1 = p.coefficients
        return -c0 / c1
    if deg == 2:
        return _quadratic_root(p)
    dp = p.derivative()
    h = _witness_recurse(dp, rng, levels)
    h2, _, _ = _newton(dp, dp.derivative(), h)
    if abs(dp(h2)) < abs(dp(h)):
        h = h2  # the sharper the derivative root, the cleaner the linear kill
    q = p.shift(h)
    qc = q.coefficients
    scale = q.coefficient_scale
    lin_ratio = abs(qc[1]) / scale
    dec = None
    if abs(qc[0]) <= 1e-12 * scale:
        kind = "constant-term-zero"
        root = 0j
    else:
        from .verify import claim1_shape_check  # runtime import: verify sits above this module

        try:
            dec = claim1_shape_check(q)
            kind = "claim1"
            # aim for the root of q nearest -h: that minimizes the final
            # witness modulus, i.e. hands back the best-conditioned root
            root = _localize_one_root(q, rng, bias=-h)
        except BinomialShape as b:
            kind = "binomial"
            base = (-b.constant / b.leading) ** (1.0 / b.degree)
            phases = [base * cmath.exp(2j * cmath.pi * k / b.degree) for k in range(b.degree)]
            root = min(phases, key=lambda r: (abs(r + h), r.real, r.imag))
        root2, _, _ = _newton(q, q.derivative(), root, 1, 50)
        if abs(q(root2)) < abs(q(root)):
            root = root2
    levels.append(WitnessLevel(shift=h, kind=kind, linear_ratio=lin_ratio, decomposition=dec))
    return root + h


def fta_witness(p: Polynomial, tol: float = 1e-10, *, seed: int = 0) -> WitnessTrace:
    """Concrete root witness by the shift-and-localize induction.

    Degrees 1 and 2 are closed form. For degree >= 3, a root h of the
    derivative recentres the polynomial so its linear coefficient
    vanishes; the recentred polynomial either passes the restricted-shape
    check and gets a root localized inside its Cauchy disk, or takes one
    of the closed-form shortcuts (vanishing constant term, pure binomial).
    The witness is that root shifted back by h.
    """
    if p.degree == 0:
        raise ConstantPolynomial("constant polynomials have no roots")
    if not tol > 0:
        raise ValueError("tol must be positive")
    rng = np.random.default_rng(seed)
    levels: list[WitnessLevel] = []
    w = _witness_recurse(p, rng, levels)
    w2, _, _ = _newton(p, p.derivative(), w)
    if abs(p(w2)) < abs(p(w)):
        w = w2
    residual = abs(p(w))
    scale = p.coefficient_scale
    if residual > tol * scale:
        raise LocalizationFailed(
            f"witness residual {residual:.3e} exceeds {tol:.1e} x coefficient scale {scale:.3e}"
        )
    levels.reverse()
    return WitnessTrace(
        depth=len(levels),
        shifts=[lv.shift for lv in levels],
        claim1_checks=levels,
        witness=w,
        residual=residual,
    )
