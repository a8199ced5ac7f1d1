"""Command-line front end: ``antibunch {dip,beat,map,witness}``.

Data goes out as CSV (header row, LF endings, 9 significant digits).  When
``--out`` is given, a JSON run manifest is written next to it as
``<out>.manifest.json``.

Exit codes: 0 ok, 1 ``--verify`` failed, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .dispersion import PAPER_ANCHORS, DEGENERATE_TEMPERATURE, DetuningCalibration, zeta_from_bandwidth
from .errors import DomainError
from .scan import Axis, CoolingParams, CountingParams, ScanConfig, delay_scan, detuning_scan, map2d
from .separability import DEFAULT_K, witness

EXIT_VERIFY = 1
EXIT_DOMAIN = 3

COUNT_COLUMNS = ["raw", "baseline", "p_hat", "std_err"]
_COUNTING_KEYS = {"pair_rate": float, "dwell_time": float, "accidental_rate": float,
                  "coincidence_window": float, "rng_seed": int}
_COOLING_KEYS = {"T_env": float, "time_constant": float}


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".9g")


def write_csv(stream, header, rows):
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def read_keyvalue(path) -> dict[str, list[str]]:
    """Flat ``key = value`` file; ``#`` starts a comment; keys may repeat."""
    out: dict[str, list[str]] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out.setdefault(key, []).append(value)
    return out


def calibration_from(values: dict[str, list[str]]) -> DetuningCalibration:
    anchors = []
    for item in values.get("anchor", []):
        t, mu = (float(s) for s in item.split(","))
        anchors.append((t, mu))
    t_deg = float(values.get("degenerate_temperature", [DEGENERATE_TEMPERATURE])[-1])
    return DetuningCalibration(tuple(anchors) or PAPER_ANCHORS, t_deg)


def _zeta(args) -> float:
    zeta = args.zeta if args.zeta is not None else zeta_from_bandwidth(args.delta_omega)
    if not zeta > 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    return zeta


def _file_values(args) -> dict[str, list[str]]:
    values: dict[str, list[str]] = {}
    for path in (getattr(args, "config", None), getattr(args, "calibration", None)):
        if path:
            for k, v in read_keyvalue(path).items():
                values.setdefault(k, []).extend(v)
    return values


def _counting(args, values) -> CountingParams | None:
    if not args.counting:
        return None
    kw = {k: conv(values[k][-1]) for k, conv in _COUNTING_KEYS.items() if k in values}
    for flag, key in (("pair_rate", "pair_rate"), ("dwell", "dwell_time"),
                      ("accidental_rate", "accidental_rate"), ("window_ns", "coincidence_window"),
                      ("seed", "rng_seed")):
        v = getattr(args, flag)
        if v is not None:
            kw[key] = v
    return CountingParams(**kw)


def _config(args, zeta, values, tau_axis=None, temperature_axis=None, cooling=None) -> ScanConfig:
    return ScanConfig(zeta=zeta, tau_axis=tau_axis, temperature_axis=temperature_axis,
                      calibration=calibration_from(values), counting=_counting(args, values),
                      cooling=cooling)


def _emit(args, header, rows, params):
    buf = io.StringIO(newline="")
    write_csv(buf, header, rows)
    text = buf.getvalue()
    if args.out:
        out = Path(args.out)
        out.write_text(text, newline="")
        write_manifest(Path(str(out) + ".manifest.json"), args.command, params, [str(out)])
    else:
        sys.stdout.write(text)


def manifest_record(subcommand, params, artifacts) -> dict:
    return {
        "tool": "antibunch",
        "version": __version__,
        "backend": _kernels.BACKEND,
        "subcommand": subcommand,
        "parameters": params,
        "artifacts": artifacts,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def write_manifest(path: Path, subcommand, params, artifacts):
    record = manifest_record(subcommand, params, artifacts)
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")


def _count_params(cfg: ScanConfig) -> dict | None:
    c = cfg.counting
    if c is None:
        return None
    return {"pair_rate": c.pair_rate, "dwell_time": c.dwell_time,
            "accidental_rate": c.accidental_rate, "coincidence_window_ns": c.coincidence_window,
            "seed": c.rng_seed}


def _count_cells(rec):
    return [rec.raw, rec.baseline, rec.p_hat, rec.std_error]


def cmd_dip(args) -> int:
    zeta = _zeta(args)
    mu = args.mu_over_zeta * zeta if args.mu_over_zeta is not None else args.mu
    values = _file_values(args)
    cfg = _config(args, zeta, values, tau_axis=Axis.parse(args.tau_range))
    records = delay_scan(cfg, mu)
    header = ["tau_ps", "mu_radps", "p_c"] + (COUNT_COLUMNS if cfg.counting else [])
    rows = [[r.tau, r.mu, r.p_c] + (_count_cells(r) if cfg.counting else []) for r in records]
    _emit(args, header, rows, {"zeta": zeta, "mu": mu, "tau_range": args.tau_range,
                               "counting": _count_params(cfg)})
    return 0


def cmd_beat(args) -> int:
    zeta = _zeta(args)
    values = _file_values(args)
    cooling = None
    if args.cooling:
        kw = {k: conv(values[k][-1]) for k, conv in _COOLING_KEYS.items() if k in values}
        if args.t_env is not None:
            kw["T_env"] = args.t_env
        if args.time_constant is not None:
            kw["time_constant"] = args.time_constant
        cooling = CoolingParams(**kw)
    cfg = _config(args, zeta, values, temperature_axis=Axis.parse(args.t_range), cooling=cooling)
    records = detuning_scan(cfg, args.tau)
    header = (["time_s"] if cooling else []) + ["temperature_c", "mu_radps", "tau_ps", "p_c"]
    header += COUNT_COLUMNS if cfg.counting else []
    rows = [([r.time_s] if cooling else []) + [r.temperature, r.mu, r.tau, r.p_c]
            + (_count_cells(r) if cfg.counting else []) for r in records]
    params = {"zeta": zeta, "tau": args.tau, "t_range": args.t_range,
              "calibration": {"anchors": [list(a) for a in cfg.calibration.anchors],
                              "degenerate_temperature": cfg.calibration.degenerate_temperature},
              "cooling": None if cooling is None else {"T_env": cooling.T_env,
                                                       "time_constant": cooling.time_constant},
              "counting": _count_params(cfg)}
    _emit(args, header, rows, params)
    return 0


def tau_symmetric(m, tol: float = 1e-12) -> bool:
    taus = m.taus
    if not np.allclose(taus, -taus[::-1], rtol=0, atol=tol * max(1.0, np.abs(taus).max())):
        return False
    return bool(np.max(np.abs(m.p_c - m.p_c[:, ::-1])) <= tol)


def cmd_map(args) -> int:
    zeta = _zeta(args)
    values = _file_values(args)
    args.counting = False
    cfg = _config(args, zeta, values, tau_axis=Axis.parse(args.tau_range),
                  temperature_axis=Axis.parse(args.t_range))
    m = map2d(cfg)
    rows = [[T, mu, tau, p] for T, mu, prow in zip(m.temperatures, m.mus, m.p_c)
            for tau, p in zip(m.taus, prow)]
    _emit(args, ["temperature_c", "mu_radps", "tau_ps", "p_c"], rows,
          {"zeta": zeta, "tau_range": args.tau_range, "t_range": args.t_range,
           "calibration": {"anchors": [list(a) for a in cfg.calibration.anchors],
                           "degenerate_temperature": cfg.calibration.degenerate_temperature}})
    if args.verify:
        ok = tau_symmetric(m)
        print(f"tau-symmetry: {'ok' if ok else 'FAILED'}", file=sys.stderr)
        if not ok:
            return EXIT_VERIFY
    return 0


def cmd_witness(args) -> int:
    v = witness(args.pc, args.sigma, args.k)
    record = {"p_c": args.pc, "std_error": args.sigma, "k": args.k, "entangled": v.entangled,
              "excess": v.excess, "significance": v.significance}
    print(v.describe())
    text = json.dumps(record, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _add_zeta(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--zeta", type=float, help="bandwidth parameter zeta (rad/ps)")
    g.add_argument("--delta-omega", type=float,
                   help="single-photon bandwidth (rad/ps); zeta = 2*delta_omega/pi")


def _add_common(p, counting=True):
    _add_zeta(p)
    p.add_argument("--out", help="CSV path (default: stdout); manifest goes to <out>.manifest.json")
    p.add_argument("--config", help="key = value file with calibration/counting parameters")
    p.add_argument("--calibration", help="key = value file with 'anchor = T, mu' lines")
    if counting:
        p.add_argument("--counting", action="store_true", help="append simulated count columns")
        p.add_argument("--seed", type=int)
        p.add_argument("--pair-rate", type=float, help="pairs/s")
        p.add_argument("--dwell", type=float, help="s per point")
        p.add_argument("--accidental-rate", type=float, help="coincidences/s")
        p.add_argument("--window-ns", type=float, help="coincidence window (ns)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antibunch",
        description="Two-photon beamsplitter interference of frequency-entangled photon pairs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dip", help="delay scan at fixed detuning")
    _add_common(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--mu", type=float, default=0.0, help="detuning (rad/ps)")
    g.add_argument("--mu-over-zeta", type=float, help="detuning in units of zeta")
    p.add_argument("--tau-range", default="-3:3:121", help="start:stop:steps in ps")
    p.set_defaults(func=cmd_dip)

    p = sub.add_parser("beat", help="temperature (detuning) scan at fixed delay")
    _add_common(p)
    p.add_argument("--tau", type=float, default=0.0, help="delay (ps)")
    p.add_argument("--t-range", default="28:90:1241", help="start:stop:steps in degrees C")
    p.add_argument("--cooling", action="store_true",
                   help="sample the temperature axis along a Newton cooling curve from its top")
    p.add_argument("--t-env", type=float, help="ambient temperature for --cooling (C)")
    p.add_argument("--time-constant", type=float, help="cooling time constant (s)")
    p.set_defaults(func=cmd_beat)

    p = sub.add_parser("map", help="2D grid of p_c over delay and temperature")
    _add_common(p, counting=False)
    p.add_argument("--tau-range", default="-3:3:81", help="start:stop:steps in ps")
    p.add_argument("--t-range", default="28:90:81", help="start:stop:steps in degrees C")
    p.add_argument("--verify", action="store_true", help="exit 1 unless the map is tau-symmetric")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("witness", help="entanglement verdict from a measured p_c")
    p.add_argument("--pc", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True, help="standard error of p_c")
    p.add_argument("--k", type=float, default=DEFAULT_K, help="significance threshold")
    p.add_argument("--out", help="write the JSON record here instead of stdout")
    p.set_defaults(func=cmd_witness)
    return parser


_RANGE_FLAGS = ("--tau-range", "--t-range")


def _glue_ranges(argv):
    # "--tau-range -3:3:121" would otherwise read -3:3:121 as an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_ranges(argv))
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
