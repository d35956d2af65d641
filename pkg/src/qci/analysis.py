"""Curve sweeps, crossing extraction, baselines, and result rendering.

A threshold estimate here is the error rate where the normalized CI curves
of two distances of the same family intersect.  Curves are swept on a
fixed grid, the sign change of their difference is located, and the
crossing is linearly interpolated inside the bracketing grid cell; the
quoted uncertainty is the raw grid spacing, since any fitting refinement
below that resolution would be false precision.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .circuit import circuit_level_rates, memory_ci, phenomenological_rates
from .frame import (
    RegisterMap,
    StabilizerCode,
    StabilizerFrame,
    complete_frame,
    css_bitflip_layout,
    full_layout,
    transform_channel,
)
from .paulis import bit_flip_channel, depolarizing_channel
from .state import (
    CiResult,
    EngineOptions,
    apply_channel,
    coherent_information,
    initial_bell_state,
)

__all__ = [
    "CiCurve",
    "CrossingResult",
    "CrossingError",
    "CrossingPreset",
    "CROSSING_PRESETS",
    "NOISE_KINDS",
    "MEMORY_PRESETS",
    "p_grid",
    "code_capacity_ci",
    "sweep_code_capacity",
    "sweep_memory",
    "sweep_single_qubit",
    "find_crossing",
    "pseudo_threshold",
    "single_qubit_ci",
    "hashing_bound",
    "hashing_zero",
    "write_csv",
    "render_svg",
]

NOISE_KINDS = ("bitflip", "depolarizing")
MEMORY_PRESETS = ("phenomenological", "circuit")


@dataclass(frozen=True, slots=True)
class CiCurve:
    """Normalized CI sampled on a strictly increasing error-rate grid."""

    label: str
    grid: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.grid) != len(self.values):
            raise ValueError(
                f"{len(self.grid)} grid points but {len(self.values)} values"
            )
        if len(self.grid) < 1:
            raise ValueError("curve needs at least one point")
        for p in self.grid:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"rate {p} outside [0, 1]")
        for a, b in zip(self.grid, self.grid[1:]):
            if not a < b:
                raise ValueError(f"grid not strictly increasing at {a}, {b}")


@dataclass(frozen=True, slots=True)
class CrossingResult:
    """Interpolated curve intersection with its grid-resolution error bar."""

    p_cross: float
    uncertainty: float
    bracket: tuple[float, float]

    def __post_init__(self) -> None:
        lo, hi = self.bracket
        if not lo <= self.p_cross <= hi:
            raise ValueError(f"crossing {self.p_cross} outside bracket {self.bracket}")


class CrossingError(ValueError):
    """Zero or several sign changes where exactly one was required."""

    def __init__(self, message: str, brackets: Iterable[tuple[float, float]] = ()):
        super().__init__(message)
        self.brackets = tuple(brackets)


def p_grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Inclusive grid from lo to hi in uniform steps.

    The end point is included when the window is a whole number of steps;
    otherwise the grid stops at the last point not exceeding hi.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError(f"need 0 <= lo < hi <= 1, got [{lo}, {hi}]")
    count = int(math.floor((hi - lo) / step + 1e-9))
    return tuple(lo + i * step for i in range(count + 1))


def _run_grid(
    fn: Callable[[float], float], grid: Sequence[float], threads: int | None
) -> tuple[float, ...]:
    # assembly is by grid index, so worker count cannot change the result
    if threads is None or threads <= 1:
        return tuple(fn(p) for p in grid)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return tuple(pool.map(fn, grid))


def _resolve_css(code: StabilizerCode, noise: str, mode: str) -> bool:
    if mode not in ("auto", "on", "off"):
        raise ValueError(f"css_reduction must be auto, on or off, got {mode!r}")
    applicable = code.is_css() and noise == "bitflip"
    if mode == "on" and not applicable:
        raise ValueError(
            "css_reduction requires a CSS code under bit-flip noise; "
            f"{code.name} with {noise} does not qualify"
        )
    return applicable and mode != "off"


def code_capacity_ci(
    code: StabilizerCode,
    noise: str,
    p: float,
    *,
    css_reduction: str = "auto",
    options: EngineOptions | None = None,
    frame: StabilizerFrame | None = None,
) -> CiResult:
    """CI after one round of i.i.d. single-qubit noise on every data qubit."""
    if noise not in NOISE_KINDS:
        raise ValueError(f"unknown noise kind {noise!r}")
    if frame is None:
        frame = complete_frame(code)
    layout = (
        css_bitflip_layout(frame)
        if _resolve_css(code, noise, css_reduction)
        else full_layout(frame)
    )
    register_map = RegisterMap.all_data(code.n)
    state = initial_bell_state(layout, options)
    for q in range(code.n):
        if noise == "bitflip":
            channel = bit_flip_channel(code.n, q, p)
        else:
            channel = depolarizing_channel(code.n, q, p)
        working = transform_channel(frame, channel, register_map, layout)
        state = apply_channel(state, working, options)
    return coherent_information(state)


def sweep_code_capacity(
    code: StabilizerCode,
    noise: str,
    grid: Sequence[float],
    *,
    css_reduction: str = "auto",
    options: EngineOptions | None = None,
    threads: int | None = None,
) -> CiCurve:
    """Normalized CI of one code over a rate grid, one noise round per rate."""
    grid = tuple(float(p) for p in grid)
    frame = complete_frame(code)

    def one(p: float) -> float:
        return code_capacity_ci(
            code, noise, p, css_reduction=css_reduction, options=options, frame=frame
        ).ci_normalized

    values = _run_grid(one, grid, threads)
    return CiCurve(label=f"{code.name} {noise}", grid=grid, values=values)


def sweep_memory(
    d: int,
    preset: str,
    grid: Sequence[float],
    *,
    options: EngineOptions | None = None,
    threads: int | None = None,
) -> CiCurve:
    """Normalized CI of the repetition memory run over a rate grid."""
    if preset not in MEMORY_PRESETS:
        raise ValueError(f"unknown memory preset {preset!r}")
    rates_of = (
        phenomenological_rates if preset == "phenomenological" else circuit_level_rates
    )
    grid = tuple(float(p) for p in grid)

    def one(p: float) -> float:
        return memory_ci(d, rates_of(p), options).ci_normalized

    values = _run_grid(one, grid, threads)
    return CiCurve(label=f"memory-{d} {preset}", grid=grid, values=values)


def sweep_single_qubit(noise: str, grid: Sequence[float]) -> CiCurve:
    """Closed-form unencoded baseline on the same grid convention."""
    grid = tuple(float(p) for p in grid)
    values = tuple(single_qubit_ci(p, noise) for p in grid)
    return CiCurve(label=f"single-qubit {noise}", grid=grid, values=values)


def find_crossing(a: CiCurve, b: CiCurve) -> CrossingResult:
    """Locate the single sign change of a - b and interpolate inside it.

    Raises CrossingError when the difference never changes sign or does so
    more than once; the exception carries every bracket found.
    """
    if a.grid != b.grid:
        raise ValueError("curves must share an identical grid")
    diff = tuple(av - bv for av, bv in zip(a.values, b.values))
    brackets: list[tuple[int, int]] = []
    for i, d0 in enumerate(diff):
        if d0 == 0.0:
            brackets.append((i, i))
        elif i + 1 < len(diff) and diff[i + 1] != 0.0 and d0 * diff[i + 1] < 0.0:
            brackets.append((i, i + 1))
    if len(brackets) != 1:
        pairs = [(a.grid[i], a.grid[j]) for i, j in brackets]
        raise CrossingError(
            f"found {len(brackets)} sign changes, need exactly one", pairs
        )
    i, j = brackets[0]
    if i == j:
        step = a.grid[min(i + 1, len(a.grid) - 1)] - a.grid[max(i - 1, 0)]
        spacing = step / max(1, min(i + 1, len(a.grid) - 1) - max(i - 1, 0))
        return CrossingResult(
            p_cross=a.grid[i], uncertainty=spacing, bracket=(a.grid[i], a.grid[i])
        )
    t = diff[i] / (diff[i] - diff[j])
    lo, hi = a.grid[i], a.grid[j]
    return CrossingResult(
        p_cross=lo + t * (hi - lo), uncertainty=hi - lo, bracket=(lo, hi)
    )


def pseudo_threshold(code_curve: CiCurve, single_curve: CiCurve) -> CrossingResult:
    """Crossing of an encoded curve with the unencoded baseline."""
    return find_crossing(code_curve, single_curve)


def _shannon_bits(probs: Iterable[float]) -> float:
    total = 0.0
    for p in probs:
        if p < 0.0:
            raise ValueError(f"negative probability {p}")
        if p > 0.0:
            total -= p * math.log2(p)
    return total


def single_qubit_ci(p: float, noise: str = "bitflip") -> float:
    """Closed-form CI of one unencoded qubit under the given noise."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rate {p} outside [0, 1]")
    if noise == "bitflip":
        return 1.0 - _shannon_bits((1.0 - p, p))
    if noise == "depolarizing":
        return 1.0 - _shannon_bits((1.0 - p, p / 3.0, p / 3.0, p / 3.0))
    raise ValueError(f"unknown noise kind {noise!r}")


def hashing_bound(noise: str, p: float) -> float:
    """1 - H of the channel's probability vector, in bits.

    For single-qubit Pauli channels this coincides with the unencoded CI.
    """
    return single_qubit_ci(p, noise)


def hashing_zero(noise: str, lo: float = 1e-6, hi: float = 0.5) -> float:
    """Smallest positive root of the hashing bound, by bisection."""
    flo, fhi = hashing_bound(noise, lo), hashing_bound(noise, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo < 0.0 or fhi > 0.0:
        raise ValueError(f"no sign change for {noise} on [{lo}, {hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hashing_bound(noise, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True, slots=True)
class CrossingPreset:
    """Named sweep window reproducing one published crossing."""

    family: str
    noise: str
    distances: tuple[int, int]
    window: tuple[float, float]
    step: float

    def grid(self) -> tuple[float, ...]:
        return p_grid(self.window[0], self.window[1], self.step)


CROSSING_PRESETS = {
    "surface-bitflip": CrossingPreset("surface", "bitflip", (3, 5), (0.09, 0.13), 2e-4),
    "color488-bitflip": CrossingPreset(
        "color488", "bitflip", (3, 5), (0.09, 0.13), 2e-4
    ),
    "surface-depolarizing": CrossingPreset(
        "surface", "depolarizing", (3, 5), (0.17, 0.21), 1e-3
    ),
    "color488-depolarizing": CrossingPreset(
        "color488", "depolarizing", (3, 5), (0.17, 0.21), 1e-3
    ),
    "memory-phenomenological": CrossingPreset(
        "repetition", "phenomenological", (3, 5), (0.10, 0.12), 2e-4
    ),
    "memory-circuit": CrossingPreset(
        "repetition", "circuit", (3, 5), (0.033, 0.042), 1e-4
    ),
}


def write_csv(curve: CiCurve, path) -> None:
    """One row per grid point, full double precision, stable byte-for-byte."""
    lines = ["p,ci_normalized"]
    lines.extend(
        f"{p:.17g},{v:.17g}" for p, v in zip(curve.grid, curve.values)
    )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_SVG_COLORS = ("#1f6fb2", "#c4452c", "#3a8f4d", "#8154a1")


def render_svg(
    curves: Sequence[CiCurve],
    crossing: CrossingResult | None = None,
    title: str = "",
) -> str:
    """Minimal self-contained line chart of CI curves with a crossing mark."""
    if not curves:
        raise ValueError("need at least one curve")
    width, height = 640, 440
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    xs = [p for c in curves for p in c.grid]
    ys = [v for c in curves for v in c.values]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return mt + (y1 - y) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
        f'font-size="15">{title}</text>',
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" '
        'stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
        f'<text x="{ml + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">'
        "error rate p</text>",
        f'<text x="18" y="{mt + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {mt + ph / 2:.1f})">CI / k</text>',
    ]
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        parts.append(
            f'<line x1="{sx(fx):.1f}" y1="{mt + ph}" x2="{sx(fx):.1f}" '
            f'y2="{mt + ph + 5}" stroke="black"/>'
            f'<text x="{sx(fx):.1f}" y="{mt + ph + 18}" text-anchor="middle">'
            f"{fx:.4g}</text>"
        )
        parts.append(
            f'<line x1="{ml - 5}" y1="{sy(fy):.1f}" x2="{ml}" y2="{sy(fy):.1f}" '
            f'stroke="black"/>'
            f'<text x="{ml - 8}" y="{sy(fy) + 4:.1f}" text-anchor="end">'
            f"{fy:.3g}</text>"
        )
    for ci, curve in enumerate(curves):
        color = _SVG_COLORS[ci % len(_SVG_COLORS)]
        pts = " ".join(
            f"{sx(p):.2f},{sy(v):.2f}" for p, v in zip(curve.grid, curve.values)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.6"/>'
        )
        parts.append(
            f'<text x="{ml + pw - 6}" y="{mt + 16 + 16 * ci}" text-anchor="end" '
            f'fill="{color}">{curve.label}</text>'
        )
    if crossing is not None:
        cy = None
        best = None
        for p, v in zip(curves[0].grid, curves[0].values):
            gap = abs(p - crossing.p_cross)
            if best is None or gap < best:
                best, cy = gap, v
        parts.append(
            f'<circle cx="{sx(crossing.p_cross):.2f}" cy="{sy(cy):.2f}" r="4.5" '
            'fill="none" stroke="black" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{sx(crossing.p_cross):.2f}" y="{sy(cy) - 10:.2f}" '
            f'text-anchor="middle">p = {crossing.p_cross:.5f}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
