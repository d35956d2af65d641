"""Command-line front end: code inspection, CI sweeps, thresholds, baselines.

Exit codes: 0 success, 1 usage error, 2 computation error (memory guard,
invalid code, missing crossing, unreadable file).  Sweep output is CSV with
header ``p,ci_normalized`` at full double precision, printed to stdout or
written to ``--csv``; values are independent of the thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .analysis import (
    CROSSING_PRESETS,
    CiCurve,
    CrossingError,
    CrossingResult,
    MEMORY_PRESETS,
    NOISE_KINDS,
    code_capacity_ci,
    find_crossing,
    hashing_bound,
    hashing_zero,
    p_grid,
    single_qubit_ci,
    sweep_code_capacity,
    sweep_memory,
    sweep_single_qubit,
    render_svg,
    write_csv,
)
from .circuit import (
    NoiseRates,
    build_repetition_memory,
    circuit_level_rates,
    memory_ci,
    phenomenological_rates,
)
from .codes import BUILTIN_FAMILIES, parse_code_file
from .frame import CodeValidationError, RegisterMap, StabilizerCode
from .oracle import OracleSizeError, dense_circuit_ci, dense_code_capacity_ci
from .state import EngineOptions, MemoryCeilingError

__all__ = ["main"]

_VISIBLE_COMMANDS = "{codes,ci,memory-ci,threshold,baseline,hashing-bound}"


class _UsageError(ValueError):
    """Bad flag syntax or a flag combination that makes no sense."""


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (
        CodeValidationError,
        CrossingError,
        MemoryCeilingError,
        OracleSizeError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qci",
        description="Exact coherent information of noisy stabilizer codes "
        "and threshold extraction from curve crossings.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar=_VISIBLE_COMMANDS)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=int,
        default=None,
        help="grid-point worker threads (default: all cores; "
        "QCI_THREADS overrides)",
    )
    common.add_argument(
        "--memory-limit-blocks",
        type=_parse_blocks,
        default=2**26,
        metavar="N",
        help="refuse layouts whose worst-case block count exceeds N "
        "(accepts forms like 2^26; default 2^26)",
    )
    common.add_argument(
        "--prune",
        type=float,
        default=0.0,
        help="drop blocks of total weight below this threshold "
        "(default 0: exact)",
    )

    code_sel = argparse.ArgumentParser(add_help=False)
    code_sel.add_argument(
        "--code",
        choices=sorted(BUILTIN_FAMILIES) + ["file"],
        help="built-in code family, or 'file' with --file",
    )
    code_sel.add_argument("--distance", type=int, help="code distance d")
    code_sel.add_argument("--file", type=Path, help="plain-text code file")

    p_codes = sub.add_parser("codes", parents=[code_sel], help="list or show codes")
    p_codes.add_argument("action", choices=["list", "show"])
    p_codes.set_defaults(func=_cmd_codes)

    p_ci = sub.add_parser(
        "ci",
        parents=[common, code_sel],
        help="code-capacity CI: one noise round on every data qubit",
    )
    p_ci.add_argument("--noise", choices=NOISE_KINDS, required=True)
    grp = p_ci.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=float, help="single error rate")
    grp.add_argument(
        "--p-range", metavar="MIN:MAX:STEP", help="inclusive sweep grid"
    )
    p_ci.add_argument(
        "--css-reduction",
        choices=["auto", "on", "off"],
        default="auto",
        help="track only the syndrome bits bit-flip noise can touch",
    )
    p_ci.add_argument("--csv", type=Path, help="write sweep rows to this file")
    p_ci.set_defaults(func=_cmd_ci)

    p_mem = sub.add_parser(
        "memory-ci",
        parents=[common],
        help="CI of the repetition-code memory circuit",
    )
    p_mem.add_argument("--distance", type=int, required=True, help="odd d >= 3")
    p_mem.add_argument("--preset", choices=MEMORY_PRESETS)
    grp = p_mem.add_mutually_exclusive_group()
    grp.add_argument("--p", type=float, help="phenomenological rate")
    grp.add_argument("--lambda", dest="lam", type=float, help="circuit-level rate")
    grp.add_argument("--p-range", metavar="MIN:MAX:STEP")
    grp.add_argument("--lambda-range", dest="lam_range", metavar="MIN:MAX:STEP")
    p_mem.add_argument(
        "--rates",
        metavar="p_sp,p_id,p_m,p2,p_data",
        help="explicit five-rate point; replaces --preset and the rate flags",
    )
    p_mem.add_argument("--csv", type=Path)
    p_mem.set_defaults(func=_cmd_memory_ci)

    p_th = sub.add_parser(
        "threshold",
        parents=[common, code_sel],
        help="crossing of two CI curves",
    )
    p_th.add_argument(
        "--preset",
        choices=sorted(CROSSING_PRESETS),
        help="named window reproducing a published crossing",
    )
    p_th.add_argument(
        "--noise",
        choices=NOISE_KINDS + MEMORY_PRESETS,
        help="bitflip/depolarizing sweep the code, "
        "phenomenological/circuit sweep the memory run",
    )
    p_th.add_argument("--distances", metavar="D1,D2", help="the two distances")
    p_th.add_argument(
        "--vs-single-qubit",
        action="store_true",
        help="cross one distance (--distance) against the unencoded qubit",
    )
    p_th.add_argument("--window", metavar="MIN:MAX")
    p_th.add_argument("--step", type=float)
    p_th.add_argument(
        "--css-reduction", choices=["auto", "on", "off"], default="auto"
    )
    p_th.add_argument("--csv", type=Path, help="per-curve CSV files (suffixed)")
    p_th.add_argument("--json", type=Path, help="machine-readable result")
    p_th.add_argument("--svg", type=Path, help="line chart with crossing marker")
    p_th.set_defaults(func=_cmd_threshold)

    p_base = sub.add_parser(
        "baseline",
        parents=[common],
        help="closed-form single-qubit CI",
    )
    p_base.add_argument("--noise", choices=NOISE_KINDS, required=True)
    grp = p_base.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=float)
    grp.add_argument("--p-range", metavar="MIN:MAX:STEP")
    p_base.add_argument("--csv", type=Path)
    p_base.set_defaults(func=_cmd_baseline)

    p_hash = sub.add_parser(
        "hashing-bound",
        parents=[common],
        help="1 - H of the channel's probability vector",
    )
    p_hash.add_argument("--noise", choices=NOISE_KINDS, required=True)
    grp = p_hash.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=float)
    grp.add_argument("--p-range", metavar="MIN:MAX:STEP")
    grp.add_argument(
        "--zero", action="store_true", help="print the bound's smallest root"
    )
    p_hash.add_argument("--csv", type=Path)
    p_hash.set_defaults(func=_cmd_hashing)

    # undocumented: dense brute-force cross-check for small instances
    p_oracle = sub.add_parser("oracle-ci", parents=[code_sel])
    p_oracle.add_argument("--noise", choices=NOISE_KINDS)
    p_oracle.add_argument("--preset", choices=MEMORY_PRESETS)
    p_oracle.add_argument("--p", type=float, required=True)
    p_oracle.set_defaults(func=_cmd_oracle_ci)

    return parser


def _parse_blocks(text: str) -> int:
    if "^" in text:
        base, _, expo = text.partition("^")
        return int(base) ** int(expo)
    return int(text)


def _parse_window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise _UsageError(f"window {text!r} must be MIN:MAX")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise _UsageError(f"window {text!r}: {exc}") from None


def _parse_range(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"range {text!r} must be MIN:MAX:STEP")
    try:
        lo, hi, step = (float(x) for x in parts)
    except ValueError as exc:
        raise _UsageError(f"range {text!r}: {exc}") from None
    return p_grid(lo, hi, step)


def _parse_rates(text: str) -> NoiseRates:
    parts = text.split(",")
    if len(parts) != 5:
        raise _UsageError(
            f"--rates needs five comma-separated values "
            f"p_sp,p_id,p_m,p2,p_data, got {text!r}"
        )
    try:
        vals = [float(x) for x in parts]
    except ValueError as exc:
        raise _UsageError(f"--rates {text!r}: {exc}") from None
    return NoiseRates(
        p_sp=vals[0], p_id=vals[1], p_m=vals[2], p_2=vals[3], p_data=vals[4]
    )


def _threads(args: argparse.Namespace) -> int | None:
    env = os.environ.get("QCI_THREADS")
    if env is not None:
        return int(env)
    if args.threads is not None:
        return args.threads
    return os.cpu_count()


def _engine_options(args: argparse.Namespace) -> EngineOptions:
    return EngineOptions(prune=args.prune, max_blocks=args.memory_limit_blocks)


def _resolve_code(args: argparse.Namespace) -> StabilizerCode:
    if args.file is not None:
        text = args.file.read_text(encoding="utf-8")
        return parse_code_file(text, name=args.file.stem)
    if args.code in (None, "file"):
        raise _UsageError("select a code with --code FAMILY --distance D, or --file")
    if args.distance is None:
        raise _UsageError(f"--code {args.code} needs --distance")
    return BUILTIN_FAMILIES[args.code](args.distance)


def _emit_curve(curve: CiCurve, csv_path: Path | None) -> None:
    if csv_path is not None:
        write_csv(curve, csv_path)
        return
    sys.stdout.write("p,ci_normalized\n")
    for p, v in zip(curve.grid, curve.values):
        sys.stdout.write(f"{p:.17g},{v:.17g}\n")


def _cmd_codes(args: argparse.Namespace) -> int:
    if args.action == "list":
        print("surface      rotated surface code, odd distance >= 3")
        print("color488     triangular square-octagon color code, odd distance >= 3")
        print("repetition   adjacent-pair parity code, distance >= 2")
        print("file         plain-text code file via --file PATH")
        return 0
    code = _resolve_code(args)
    dist = "?" if code.distance is None else str(code.distance)
    print(f"# {code.name} [[{code.n},{code.k},{dist}]]")
    print(f"n {code.n} k {code.k}")
    for s in code.stabilizers:
        print(f"S {s}")
    for op in code.logical_x:
        print(f"LX {op}")
    for op in code.logical_z:
        print(f"LZ {op}")
    return 0


def _cmd_ci(args: argparse.Namespace) -> int:
    code = _resolve_code(args)
    options = _engine_options(args)
    if args.p is not None:
        res = code_capacity_ci(
            code, args.noise, args.p,
            css_reduction=args.css_reduction, options=options,
        )
        print(f"{res.ci_normalized:.12g}")
        return 0
    curve = sweep_code_capacity(
        code,
        args.noise,
        _parse_range(args.p_range),
        css_reduction=args.css_reduction,
        options=options,
        threads=_threads(args),
    )
    _emit_curve(curve, args.csv)
    return 0


def _cmd_memory_ci(args: argparse.Namespace) -> int:
    options = _engine_options(args)
    if args.rates is not None:
        if any(x is not None for x in (args.p, args.lam, args.p_range, args.lam_range)):
            raise _UsageError("--rates already fixes every rate; drop the rate flags")
        res = memory_ci(args.distance, _parse_rates(args.rates), options)
        print(f"{res.ci_normalized:.12g}")
        return 0
    if args.preset is None:
        raise _UsageError("pick --preset phenomenological|circuit, or give --rates")
    single = args.p if args.p is not None else args.lam
    if single is not None:
        rates = (
            phenomenological_rates(single)
            if args.preset == "phenomenological"
            else circuit_level_rates(single)
        )
        res = memory_ci(args.distance, rates, options)
        print(f"{res.ci_normalized:.12g}")
        return 0
    rng = args.p_range if args.p_range is not None else args.lam_range
    if rng is None:
        raise _UsageError("give --p/--lambda, a range, or --rates")
    curve = sweep_memory(
        args.distance,
        args.preset,
        _parse_range(rng),
        options=options,
        threads=_threads(args),
    )
    _emit_curve(curve, args.csv)
    return 0


def _memory_noise(noise: str) -> bool:
    return noise in MEMORY_PRESETS


def _cmd_threshold(args: argparse.Namespace) -> int:
    options = _engine_options(args)
    threads = _threads(args)
    if args.preset is not None:
        preset = CROSSING_PRESETS[args.preset]
        family, noise = preset.family, preset.noise
        d1, d2 = preset.distances
        window, step = preset.window, preset.step
    else:
        if args.noise is None or args.window is None or args.step is None:
            raise _UsageError("need --preset, or --noise with --window and --step")
        family, noise = args.code, args.noise
        window, step = _parse_window(args.window), args.step
        d1 = d2 = None
        if args.distances is not None:
            parts = args.distances.split(",")
            if len(parts) != 2:
                raise _UsageError(f"--distances must be D1,D2, got {args.distances!r}")
            d1, d2 = int(parts[0]), int(parts[1])
    grid = p_grid(window[0], window[1], step)

    def code_curve(d: int) -> CiCurve:
        if _memory_noise(noise):
            return sweep_memory(d, noise, grid, options=options, threads=threads)
        if args.file is not None:
            code = _resolve_code(args)
        else:
            if family in (None, "file"):
                raise _UsageError("select the code family with --code or --file")
            code = BUILTIN_FAMILIES[family](d)
        return sweep_code_capacity(
            code, noise, grid,
            css_reduction=args.css_reduction, options=options, threads=threads,
        )

    if args.vs_single_qubit:
        if _memory_noise(noise):
            raise _UsageError("the unencoded baseline exists for bitflip/depolarizing")
        d = d1 if d1 is not None else args.distance
        if d is None and args.file is None:
            raise _UsageError("--vs-single-qubit needs --distance or --file")
        curves = [code_curve(d), sweep_single_qubit(noise, grid)]
        names = [f"d{d}" if d is not None else "file", "single"]
        distances = [d if d is not None else 0, 1]
    else:
        if d1 is None or d2 is None:
            raise _UsageError("give --distances D1,D2 (or --vs-single-qubit)")
        curves = [code_curve(d1), code_curve(d2)]
        names = [f"d{d1}", f"d{d2}"]
        distances = [d1, d2]

    crossing = find_crossing(curves[0], curves[1])
    print(
        f"p_cross = {crossing.p_cross:.6g} +- {crossing.uncertainty:.3g} "
        f"(bracket [{crossing.bracket[0]:.6g}, {crossing.bracket[1]:.6g}])"
    )

    curve_paths: list[str] = []
    if args.csv is not None:
        for curve, tag in zip(curves, names):
            path = args.csv.with_name(f"{args.csv.stem}-{tag}{args.csv.suffix}")
            write_csv(curve, path)
            curve_paths.append(str(path))
    if args.json is not None:
        _write_json(
            args.json, args, family, noise, distances, window, step,
            crossing, curve_paths, threads,
        )
    if args.svg is not None:
        title = f"{family or 'file'} {noise} crossing"
        args.svg.write_text(render_svg(curves, crossing, title), encoding="ascii")
    return 0


def _write_json(
    path: Path,
    args: argparse.Namespace,
    family: str | None,
    noise: str,
    distances: list[int],
    window: tuple[float, float],
    step: float,
    crossing: CrossingResult,
    curve_paths: list[str],
    threads: int | None,
) -> None:
    if _memory_noise(noise):
        code_name, k = "repetition-memory", 1
    else:
        sample = (
            _resolve_code(args)
            if args.file is not None
            else BUILTIN_FAMILIES[family](max(d for d in distances if d > 1))
        )
        code_name, k = sample.name, sample.k
    payload = {
        "code": code_name,
        "k": k,
        "distances": distances,
        "noise": noise,
        "preset": args.preset,
        "grid": {"min": window[0], "max": window[1], "step": step},
        "crossing": {
            "p": crossing.p_cross,
            "uncertainty": crossing.uncertainty,
            "bracket": list(crossing.bracket),
        },
        "engine": {
            "css_reduction": getattr(args, "css_reduction", "auto"),
            "threads": threads,
        },
        "curves": curve_paths,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="ascii")


def _closed_form_curve(kind_label: str, noise: str, grid, fn) -> CiCurve:
    return CiCurve(
        label=f"{kind_label} {noise}",
        grid=grid,
        values=tuple(fn(p) for p in grid),
    )


def _cmd_baseline(args: argparse.Namespace) -> int:
    if args.p is not None:
        print(f"{single_qubit_ci(args.p, args.noise):.12g}")
        return 0
    grid = _parse_range(args.p_range)
    curve = _closed_form_curve(
        "single-qubit", args.noise, grid, lambda p: single_qubit_ci(p, args.noise)
    )
    _emit_curve(curve, args.csv)
    return 0


def _cmd_hashing(args: argparse.Namespace) -> int:
    if args.zero:
        print(f"{hashing_zero(args.noise):.12g}")
        return 0
    if args.p is not None:
        print(f"{hashing_bound(args.noise, args.p):.12g}")
        return 0
    grid = _parse_range(args.p_range)
    curve = _closed_form_curve(
        "hashing-bound", args.noise, grid, lambda p: hashing_bound(args.noise, p)
    )
    _emit_curve(curve, args.csv)
    return 0


def _cmd_oracle_ci(args: argparse.Namespace) -> int:
    if args.preset is not None:
        d = args.distance if args.distance is not None else 3
        rates = (
            phenomenological_rates(args.p)
            if args.preset == "phenomenological"
            else circuit_level_rates(args.p)
        )
        circ = build_repetition_memory(d, rates)
        code = BUILTIN_FAMILIES["repetition"](d)
        register_map = RegisterMap(
            circ.n_register,
            data=tuple(range(d)),
            ancilla=tuple(range(d, circ.n_register)),
        )
        value = dense_circuit_ci(code, register_map, circ.elements) / code.k
        print(f"{value:.12g}")
        return 0
    if args.noise is None:
        raise _UsageError("oracle-ci needs --noise or --preset")
    code = _resolve_code(args)
    value = dense_code_capacity_ci(code, args.noise, args.p) / code.k
    print(f"{value:.12g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
