"""Command-line front end: ``design``, ``analyze`` and ``estimate``.

Every subcommand accepts ``--config FILE`` (JSON); explicit flags override
values from the file.  Outputs go to ``--out-dir``, falling back to the
``EXSCA_OUTPUT_DIR`` environment variable and then ``./exsca_out``.

Exit codes: 0 success, 2 configuration error, 3 closed form inapplicable
because of overlapping elements (only with ``--strict``).
"""
import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import closedform, diffset, geometry, multidim, spectral

EXIT_CONFIG = 2
EXIT_INAPPLICABLE = 3

_int_or_list = {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}}]}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "family": {"enum": ["apca", "exsca", "generalized", "hybrid2d"]},
        "M": _int_or_list,
        "N": _int_or_list,
        "s": _int_or_list,
        "ex": {"type": "integer", "minimum": 1},
        "p": {"type": "array", "items": {"type": "integer"}},
        "E": {"type": "array", "items": {"type": "integer"}},
        "r": {"type": "array", "items": {"type": "integer"}},
        "displaced": {"type": "boolean"},
        "sweep": {"type": "array", "items": {"type": "integer"}},
        "sweep_index": {"type": "integer", "minimum": 0},
        "peaks": {"type": "array", "items": {"oneOf": [
            {"type": "number"}, {"type": "array", "items": {"type": "number"}}]}},
        "amplitudes": {"type": "array", "items": {"type": "number"}},
        "noise_variance": {"type": "number", "minimum": 0},
        "real": {"type": "boolean"},
        "K": {"type": "integer", "minimum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "grid": {"type": "integer", "minimum": 2},
        "band": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "compare_prototype": {"type": "boolean"},
        "nyquist_axis": {"type": "integer", "minimum": 0, "maximum": 1},
        "out_dir": {"type": "string"},
        "strict": {"type": "boolean"},
    },
}

DEFAULTS = {
    "family": "apca", "ex": 2, "displaced": False, "sweep_index": -1,
    "K": 10, "trials": 100, "seed": 0, "grid": closedform.DEFAULT_GRID,
    "noise_variance": 0.0, "real": False, "compare_prototype": False,
    "nyquist_axis": 0, "strict": False,
}


class ConfigError(Exception):
    pass


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return values[0] if len(values) == 1 else values


def _float_list(text):
    return [float(v) for v in text.split(",")]


def _peaks(text):
    """``0.1,0.3`` for 1D or ``0.1:0,0.3:0`` for 2D peaks."""
    out = []
    for item in text.split(","):
        if ":" in item:
            out.append([float(v) for v in item.split(":")])
        else:
            out.append(float(item))
    return out


def _range(text):
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",")]


def build_parser():
    parser = argparse.ArgumentParser(prog="exsca", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--family", choices=["apca", "exsca", "generalized", "hybrid2d"])
        p.add_argument("-M", type=_int_list, help="spacing (comma list for generalized)")
        p.add_argument("-N", type=_int_list, help="element count (comma list for generalized)")
        p.add_argument("-s", type=_int_list, help="shift (comma list for generalized)")
        p.add_argument("--ex", type=int, help="sparsity factor for exsca")
        p.add_argument("-p", type=_int_list, help="compression factors (generalized)")
        p.add_argument("-E", type=_int_list, help="sparsity factors (generalized)")
        p.add_argument("-r", type=_int_list, help="periods (generalized)")
        p.add_argument("--displaced", action="store_true", default=None,
                       help="allow shifts beyond the usual range")
        p.add_argument("--out-dir", dest="out_dir",
                       help="output directory (default $EXSCA_OUTPUT_DIR or ./exsca_out)")
        p.add_argument("--grid", type=int, help="frequency grid size G (default 4096)")

    p = sub.add_parser("design", help="element positions, pivot and overlaps as JSON")
    common(p)
    p.add_argument("--stdout", action="store_true", help="print JSON instead of writing a file")

    p = sub.add_parser("analyze", help="weights, bias windows and theory comparison")
    common(p)
    p.add_argument("--sweep", type=_range, help="shift values, e.g. 0..5")
    p.add_argument("--sweep-index", dest="sweep_index", type=int,
                   help="which subarray's shift to sweep (generalized; default last)")
    p.add_argument("--strict", action="store_true", default=None,
                   help="exit 3 if any closed form is inapplicable")

    p = sub.add_parser("estimate", help="seeded Monte Carlo correlogram estimation")
    common(p)
    p.add_argument("--peaks", type=_peaks,
                   help="tone frequencies in units of pi, e.g. 0.1,0.3 or 0.1:0,0.3:0 in 2D")
    p.add_argument("--amplitudes", type=_float_list, help="one amplitude per peak")
    p.add_argument("--noise-variance", dest="noise_variance", type=float,
                   help="complex white noise variance (default 0)")
    p.add_argument("--real", action="store_true", default=None,
                   help="real cosines instead of complex exponentials")
    p.add_argument("-K", type=int, help="snapshots per estimate (default 10)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials (default 100)")
    p.add_argument("--seed", type=int, help="base seed; trial t uses seed + t")
    p.add_argument("--band", type=_float_list, help="peak search band lo,hi")
    p.add_argument("--compare-prototype", dest="compare_prototype", action="store_true",
                   default=None, help="also count maxima of the s=0 co-prime pair")
    p.add_argument("--nyquist-axis", dest="nyquist_axis", type=int,
                   help="hybrid2d: axis (0 or 1) sampled densely")
    return parser


def load_config(args):
    cfg = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config: {exc.message}")
    merged = dict(DEFAULTS)
    merged.update(cfg)
    for key, value in vars(args).items():
        if key in ("command", "config", "stdout") or value is None:
            continue
        merged[key] = value
    merged.setdefault("out_dir", os.environ.get("EXSCA_OUTPUT_DIR", "exsca_out"))
    return merged


def _as_list(value, name):
    if value is None:
        raise ConfigError(f"missing parameter {name}")
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _as_int(value, name):
    if value is None:
        raise ConfigError(f"missing parameter -{name}")
    if isinstance(value, (list, tuple)):
        if len(value) != 1:
            raise ConfigError(f"-{name} takes a single integer for this family")
        value = value[0]
    return int(value)


def make_geometry(cfg, shift=None):
    """Array configuration from merged settings; ``shift`` overrides the swept shift."""
    family = cfg["family"]
    try:
        if family in ("apca", "exsca", "hybrid2d"):
            M, N = _as_int(cfg.get("M"), "M"), _as_int(cfg.get("N"), "N")
            s = _as_int(cfg.get("s", 0 if family == "apca" else 1), "s") if shift is None else shift
            if family == "apca":
                return geometry.ApcaConfig(M, N, s, displaced=cfg["displaced"])
            return geometry.ExscaConfig(M, N, s, ex=cfg["ex"], displaced=cfg["displaced"])
        counts = _as_list(cfg.get("N"), "N")
        q = len(counts)
        shifts = _as_list(cfg.get("s", [0] * q), "s")
        if shift is not None:
            shifts = list(shifts)
            shifts[cfg["sweep_index"]] = shift
        return geometry.GeneralizedConfig.from_lists(
            counts, _as_list(cfg.get("M"), "M"), cfg.get("p"), cfg.get("E"),
            cfg.get("r"), shifts)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc))


def _period(geo):
    if isinstance(geo, (geometry.ApcaConfig, geometry.ExscaConfig)):
        if geo.displaced:
            return geometry.positions(geo)[1].extent
        return geo.period
    return geometry.positions(geo)[1].extent


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _tag(geo):
    params = geometry.params_of(geo)
    s = params["s"]
    return "s" + ("_".join(str(v) for v in s) if isinstance(s, list) else str(s))


def cmd_design(cfg, stdout=False):
    geo = make_geometry(cfg)
    text = _dump(geometry.geometry_record(geo))
    if stdout:
        sys.stdout.write(text)
    else:
        out = Path(cfg["out_dir"]) / "geometry.json"
        _write(out, text)
        print(out)
    return 0


def cmd_analyze(cfg):
    sweep = cfg.get("sweep")
    geos = [make_geometry(cfg, s) for s in sweep] if sweep else [make_geometry(cfg)]
    out_dir = Path(cfg["out_dir"])
    grid = cfg["grid"]
    records = []
    for geo in geos:
        _, union = geometry.positions(geo)
        z = diffset.weight_function(union)
        tag = _tag(geo)
        _write(out_dir / f"weights_{tag}.csv", z.to_csv())
        _write(out_dir / f"bias_simulated_{tag}.csv", closedform.dtft_window(z, grid).to_csv())
        record = closedform.comparison_record(geo, grid)
        if record["applicable"]:
            _write(out_dir / f"bias_theory_{tag}.csv", closedform.bias_closed(geo, grid).to_csv())
        records.append(record)
    _write(out_dir / "comparison.json", _dump(records))
    print(out_dir / "comparison.json")
    if cfg["strict"] and any(not r["applicable"] for r in records):
        bad = [r["config"] for r in records if not r["applicable"]]
        print(f"closed form inapplicable (overlapping elements) for {bad}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    return 0


def _estimate_1d(cfg, out_dir):
    geo = make_geometry(cfg)
    _, union = geometry.positions(geo)
    period = _period(geo)
    peaks = cfg.get("peaks")
    if not peaks or any(isinstance(p, list) for p in peaks):
        raise ConfigError("1D estimation needs --peaks as a list of numbers")
    try:
        model = spectral.SignalModel(peaks, cfg.get("amplitudes"), cfg["noise_variance"],
                                     cfg["seed"], cfg["real"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    if cfg.get("band"):
        band = tuple(cfg["band"])
    elif cfg["compare_prototype"]:
        band = spectral.peak_band(peaks)
    else:
        band = (0.0, 1.0)
    grid, K, trials = cfg["grid"], cfg["K"], cfg["trials"]
    mean_error, failures = spectral.monte_carlo_peak_error(
        union, period, model, K, trials, cfg["seed"], grid, band)
    z = diffset.weight_function(union)
    first = spectral.estimate_spectrum(union, period, model, K, grid, z)
    _write(out_dir / "spectrum.csv", first.to_csv())
    try:
        found = spectral.find_peaks(first, len(peaks), band)
    except spectral.PeakCountError as exc:
        found = exc.found
    report = {
        "config": geometry.geometry_record(geo)["params"],
        "family": cfg["family"], "K": K, "trials": trials, "seed": cfg["seed"],
        "peaks_true": sorted(peaks), "peaks_found": found,
        "mean_error": None if np.isnan(mean_error) else mean_error,
        "failed_trials": failures,
        "band": list(band),
        "peaks_in_band": spectral.count_peaks(first, band),
    }
    if cfg["compare_prototype"]:
        proto = geometry.ApcaConfig(geo.M, geo.N, 0)
        _, proto_union = geometry.positions(proto)
        spec = spectral.estimate_spectrum(proto_union, proto.period, model, K, grid)
        n_proto = spectral.count_peaks(spec, band)
        report["prototype_peaks_in_band"] = n_proto
        report["resolves_better_than_prototype"] = (
            report["peaks_in_band"] >= len(peaks) > n_proto)
    return report


def _estimate_2d(cfg, out_dir):
    geo = make_geometry(cfg)
    _, union = geometry.positions(geo)
    period = _period(geo)
    sparse = multidim.pattern_from_union(union, period, "exsca")
    factors = [sparse, sparse]
    factors[cfg["nyquist_axis"]] = multidim.nyquist_pattern(period)
    pattern = multidim.outer(*factors)
    peaks = cfg.get("peaks")
    if not peaks or not all(isinstance(p, list) for p in peaks):
        raise ConfigError("hybrid2d estimation needs --peaks as f1:f2 pairs")
    try:
        model = multidim.SignalModel2D(peaks, cfg.get("amplitudes"), cfg["noise_variance"],
                                       cfg["seed"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    grid = cfg["grid"] if cfg["grid"] <= 512 else 256
    x = multidim.generate_snapshots_nd(model, pattern.shape, cfg["K"])
    spec = multidim.periodogram_2d(x, pattern, grid)
    _write(out_dir / "spectrum2d.csv", spec.to_csv())
    found = multidim.find_peaks_nd(spec, len(peaks))
    return {
        "config": geometry.geometry_record(geo)["params"],
        "family": "hybrid2d", "K": cfg["K"], "seed": cfg["seed"], "grid": grid,
        "peaks_true": sorted(peaks), "peaks_found": [list(p) for p in found],
    }


def cmd_estimate(cfg):
    out_dir = Path(cfg["out_dir"])
    if cfg["family"] == "hybrid2d":
        report = _estimate_2d(cfg, out_dir)
    else:
        report = _estimate_1d(cfg, out_dir)
    _write(out_dir / "peaks.json", _dump(report))
    print(out_dir / "peaks.json")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        if args.command == "design":
            return cmd_design(cfg, stdout=args.stdout)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        return cmd_estimate(cfg)
    except ConfigError as exc:
        print(f"exsca: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
