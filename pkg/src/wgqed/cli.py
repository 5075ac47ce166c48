"""Command-line front end.

Subcommands: modes, selfenergy, reflectance, channels, resonances, figure,
physical.  Each accepts an optional JSON config file (strict keys — typos
are errors) with individual flags taking precedence, and writes CSV (the
default for tables) or JSON.  Scan-style CSV uses the header

    E,total_R,total_T,loss,delta,gamma,open_count

with `#`-prefixed comment lines carrying the resolved configuration, peak
locations, and per-row flags; floats are printed with 17 significant
digits so parsing an emitted file reproduces the table exactly.

Exit codes: 0 success, 2 configuration error, 3 domain error,
4 numerical non-convergence.  Failures print a machine-readable JSON
error record to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import (
    ConfigError,
    CutoffSingularity,
    NonConvergence,
    TruncationTooSmall,
    UnknownPreset,
    WaveguideError,
)
from .modes import (
    CouplingConfig,
    OrderingPolicy,
    WaveguideGeometry,
    cutoff_frequency,
    enumerate_modes,
    make_context,
)
from .physical import (
    FrequencyConvention,
    cutoff_report,
    midgap_energy,
    physical_sizing,
)
from .scattering import channel_decomposition
from .self_energy import (
    DEFAULT_N_MODES_LAMB,
    TlsParams,
    resonance_energies,
    self_energy,
)
from .spectra import (
    CcIncidence,
    Incidence,
    ModeIncidence,
    Peak,
    ScanSpec,
    SpectrumRow,
    VectorIncidence,
    figure_curves,
    find_peaks,
    scan,
)

SPECTRUM_HEADER = "E,total_R,total_T,loss,delta,gamma,open_count"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NONCONVERGENCE = 4


# --- formatting helpers ---------------------------------------------------


def _fmt(value) -> str:
    """One CSV cell: 17-significant-digit floats, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    return "%.17g" % value


def _config_comment(config: dict) -> str:
    return "# config=" + json.dumps(config, sort_keys=True, separators=(",", ":"))


# --- incidence (de)serialization -----------------------------------------


def incidence_to_config(incident: Incidence) -> dict:
    if isinstance(incident, ModeIncidence):
        return {"type": "mode", "m": incident.m, "n": incident.n}
    if isinstance(incident, CcIncidence):
        return {"type": "cc"}
    return {
        "type": "vector",
        "amplitudes": [[a.real, a.imag] for a in incident.amplitudes],
    }


def incidence_from_config(obj) -> Incidence:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError(f"incidence must be an object with a 'type' key, got {obj!r}")
    kind = obj["type"]
    if kind == "mode":
        extra = set(obj) - {"type", "m", "n"}
        if extra:
            raise ConfigError(f"unknown incidence keys: {sorted(extra)}")
        return ModeIncidence(int(obj.get("m", 1)), int(obj.get("n", 1)))
    if kind == "cc":
        if set(obj) - {"type"}:
            raise ConfigError("cc incidence takes no extra keys")
        return CcIncidence()
    if kind == "vector":
        extra = set(obj) - {"type", "amplitudes"}
        if extra:
            raise ConfigError(f"unknown incidence keys: {sorted(extra)}")
        raw = obj.get("amplitudes")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("vector incidence needs a non-empty amplitudes list")
        amps = []
        for item in raw:
            if isinstance(item, (int, float)):
                amps.append(complex(item))
            elif isinstance(item, list) and len(item) == 2:
                amps.append(complex(float(item[0]), float(item[1])))
            else:
                raise ConfigError(
                    f"amplitude entries must be numbers or [re, im] pairs, got {item!r}"
                )
        return VectorIncidence(tuple(amps))
    raise ConfigError(f"unknown incidence type {kind!r}")


def incidence_from_string(text: str) -> Incidence:
    """Parse the --incident flag: 'cc', 'tmMN', 'mode:m,n', 'vector:a,b,...'."""
    s = text.strip().lower()
    if s == "cc":
        return CcIncidence()
    if s.startswith("tm") and len(s) == 4 and s[2:].isdigit():
        return ModeIncidence(int(s[2]), int(s[3]))
    if s.startswith("mode:"):
        parts = s[5:].split(",")
        if len(parts) != 2:
            raise ConfigError(f"mode incidence needs 'mode:m,n', got {text!r}")
        return ModeIncidence(int(parts[0]), int(parts[1]))
    if s.startswith("vector:"):
        try:
            amps = tuple(complex(float(p)) for p in s[7:].split(","))
        except ValueError:
            raise ConfigError(f"could not parse vector amplitudes in {text!r}") from None
        return VectorIncidence(amps)
    raise ConfigError(
        f"unknown incidence {text!r}; expected 'cc', 'tmMN', 'mode:m,n' or 'vector:...'"
    )


# --- run configuration ----------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Resolved scan configuration plus output plumbing."""

    scan: ScanSpec
    format: str = "csv"
    output: str = "-"
    plot: bool = False
    threads: int = 1


def scan_spec_to_config(spec: ScanSpec, fmt: str | None = None) -> dict:
    config = {
        "e_min": spec.e_min,
        "e_max": spec.e_max,
        "points": spec.points,
        "incidence": incidence_to_config(spec.incident),
        "omega_a": spec.tls.omega_a,
        "g_squared": spec.coupling.g_squared,
        "aspect_ratio": spec.geometry.aspect_ratio,
        "ordering_policy": spec.ordering_policy.value,
        "n_modes_lamb": "open" if spec.n_modes_lamb is None else spec.n_modes_lamb,
    }
    if fmt is not None:
        config["format"] = fmt
    return config


def _load_config_file(path, allowed: set[str]) -> dict:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(
            f"unknown config keys: {sorted(unknown)}; allowed: {sorted(allowed)}"
        )
    return obj


def _parse_n_modes_lamb(value) -> int | None:
    if value is None or value == "open":
        return None
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"n_modes_lamb must be a positive integer or 'open', got {value!r}"
        ) from None
    if n < 1:
        raise ConfigError(f"n_modes_lamb must be >= 1, got {n}")
    return n


_SCAN_KEYS = {
    "e_min",
    "e_max",
    "points",
    "incidence",
    "omega_a",
    "g_squared",
    "aspect_ratio",
    "ordering_policy",
    "n_modes_lamb",
    "format",
    "output",
    "plot",
    "threads",
}


def resolve_run_config(args, *, default_n_modes: int | str = "open") -> RunConfig:
    """Merge defaults <- config file <- flags into a RunConfig."""
    file_cfg = {}
    if getattr(args, "config", None):
        file_cfg = _load_config_file(args.config, _SCAN_KEYS)

    def pick(key, flag_value, fallback):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return file_cfg[key]
        return fallback

    incident = args.incident
    if incident is not None:
        incident = incidence_from_string(incident)
    elif "incidence" in file_cfg:
        incident = incidence_from_config(file_cfg["incidence"])
    else:
        incident = ModeIncidence()

    policy = pick("ordering_policy", args.ordering_policy, OrderingPolicy.FIGURE.value)
    try:
        policy = OrderingPolicy(policy)
    except ValueError:
        raise ConfigError(f"unknown ordering policy {policy!r}") from None

    e_min = pick("e_min", args.emin, None)
    e_max = pick("e_max", args.emax, None)
    if e_min is None or e_max is None:
        raise ConfigError("a scan needs e_min and e_max (flags --emin/--emax)")

    geometry = WaveguideGeometry(
        aspect_ratio=float(pick("aspect_ratio", args.aspect_ratio, 2.0))
    )
    try:
        spec = ScanSpec(
            e_min=float(e_min),
            e_max=float(e_max),
            points=int(pick("points", args.points, 4000)),
            incident=incident,
            tls=TlsParams(
                omega_a=float(pick("omega_a", args.omega_a, midgap_energy(geometry)))
            ),
            coupling=CouplingConfig(g_squared=float(pick("g_squared", args.g_squared, 0.01))),
            geometry=geometry,
            ordering_policy=policy,
            n_modes_lamb=_parse_n_modes_lamb(
                pick("n_modes_lamb", args.n_modes_lamb, default_n_modes)
            ),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    threads = int(pick("threads", getattr(args, "threads", None), 1))
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    fmt = pick("format", getattr(args, "format", None), "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")
    return RunConfig(
        scan=spec,
        format=fmt,
        output=str(pick("output", getattr(args, "output", None), "-")),
        plot=bool(pick("plot", True if getattr(args, "plot", False) else None, False)),
        threads=threads,
    )


# --- spectrum CSV/JSON ----------------------------------------------------


def _spectrum_cells(row: SpectrumRow) -> list:
    return [
        row.energy,
        row.total_r,
        row.total_t,
        row.loss,
        row.delta,
        row.gamma,
        row.open_count,
    ]


def render_spectrum_csv(config: dict, rows: list[SpectrumRow], peaks: list[Peak]) -> str:
    lines = [_config_comment(config)]
    for pk in peaks:
        lines.append(f"# peak E={_fmt(pk.energy)} total_R={_fmt(pk.value)}")
    lines.append(SPECTRUM_HEADER)
    for row in rows:
        if row.flag is not None:
            lines.append(f"# flag E={_fmt(row.energy)} reason={row.flag}")
        lines.append(",".join(_fmt(c) for c in _spectrum_cells(row)))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ParsedSpectrum:
    config: dict
    rows: list[SpectrumRow]
    peaks: list[Peak]


def parse_spectrum_csv(text: str) -> ParsedSpectrum:
    """Read back a spectrum CSV emitted by this tool (exact round-trip)."""
    config: dict = {}
    rows: list[SpectrumRow] = []
    peaks: list[Peak] = []
    pending_flag: str | None = None
    saw_header = False
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("config="):
                config = json.loads(body[len("config="):])
            elif body.startswith("peak "):
                fields = dict(p.split("=", 1) for p in body[len("peak "):].split())
                peaks.append(Peak(float(fields["E"]), float(fields["total_R"])))
            elif body.startswith("flag "):
                fields = dict(p.split("=", 1) for p in body[len("flag "):].split())
                pending_flag = fields.get("reason", "unknown")
            continue
        if not saw_header:
            if line != SPECTRUM_HEADER:
                raise ConfigError(f"unexpected CSV header {line!r}")
            saw_header = True
            continue
        cells = line.split(",")
        if len(cells) != 7:
            raise ConfigError(f"expected 7 CSV cells, got {len(cells)}: {line!r}")

        def num(cell):
            return None if cell == "" else float(cell)

        rows.append(
            SpectrumRow(
                energy=float(cells[0]),
                total_r=num(cells[1]),
                total_t=num(cells[2]),
                loss=num(cells[3]),
                delta=num(cells[4]),
                gamma=num(cells[5]),
                open_count=None if cells[6] == "" else int(cells[6]),
                flag=pending_flag,
            )
        )
        pending_flag = None
    if not saw_header:
        raise ConfigError("no spectrum header found in CSV text")
    return ParsedSpectrum(config=config, rows=rows, peaks=peaks)


def _row_to_json(row: SpectrumRow) -> dict:
    return {
        "E": row.energy,
        "total_R": row.total_r,
        "total_T": row.total_t,
        "loss": row.loss,
        "delta": row.delta,
        "gamma": row.gamma,
        "open_count": row.open_count,
        "flag": row.flag,
    }


def render_spectrum_json(config: dict, rows: list[SpectrumRow], peaks: list[Peak]) -> str:
    payload = {
        "config": config,
        "rows": [_row_to_json(r) for r in rows],
        "peaks": [{"E": p.energy, "total_R": p.value} for p in peaks],
    }
    return json.dumps(payload, indent=2) + "\n"


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- generic small tables -------------------------------------------------


def _render_table_csv(config: dict, header: list[str], table: list[list]) -> str:
    lines = [_config_comment(config), ",".join(header)]
    for row in table:
        lines.append(",".join(_fmt(c) for c in row))
    return "\n".join(lines) + "\n"


def _render_result_json(config: dict, result: dict) -> str:
    return json.dumps({"config": config, "result": result}, indent=2) + "\n"


# --- subcommands ----------------------------------------------------------


def cmd_modes(args) -> int:
    allowed = {"e_max", "aspect_ratio", "ordering_policy", "format", "output"}
    file_cfg = _load_config_file(args.config, allowed) if args.config else {}

    def pick(key, flag, fallback):
        return flag if flag is not None else file_cfg.get(key, fallback)

    e_max = float(pick("e_max", args.emax, 8.0))
    aspect = float(pick("aspect_ratio", args.aspect_ratio, 2.0))
    policy_name = pick("ordering_policy", args.ordering_policy, OrderingPolicy.PHYSICAL.value)
    try:
        policy = OrderingPolicy(policy_name)
    except ValueError:
        raise ConfigError(f"unknown ordering policy {policy_name!r}") from None
    fmt = pick("format", args.format, "csv")
    output = str(pick("output", args.output, "-"))

    ordering = enumerate_modes(WaveguideGeometry(aspect_ratio=aspect), e_max, policy)
    config = {
        "e_max": e_max,
        "aspect_ratio": aspect,
        "ordering_policy": policy.value,
        "format": fmt,
    }
    if fmt == "json":
        result = {
            "modes": [
                {"m": md.m, "n": md.n, "cutoff": md.cutoff, "coupling_sign": md.sign}
                for md in ordering.modes
            ]
        }
        _write_text(output, _render_result_json(config, result))
    else:
        table = [[md.m, md.n, md.cutoff, md.sign] for md in ordering.modes]
        _write_text(
            output,
            _render_table_csv(config, ["m", "n", "cutoff", "coupling_sign"], table),
        )
    return EXIT_OK


def cmd_selfenergy(args) -> int:
    allowed = {
        "e_min", "e_max", "points", "g_squared", "aspect_ratio",
        "ordering_policy", "n_modes_lamb", "format", "output", "plot",
    }
    file_cfg = _load_config_file(args.config, allowed) if args.config else {}

    def pick(key, flag, fallback):
        return flag if flag is not None else file_cfg.get(key, fallback)

    e_min = float(pick("e_min", args.emin, 2.0))
    e_max = float(pick("e_max", args.emax, 8.0))
    points = int(pick("points", args.points, 601))
    if not e_min < e_max:
        raise ConfigError("selfenergy needs e_min < e_max")
    if points < 2:
        raise ConfigError("selfenergy needs at least 2 points")
    g2 = float(pick("g_squared", args.g_squared, 0.01))
    aspect = float(pick("aspect_ratio", args.aspect_ratio, 2.0))
    policy_name = pick("ordering_policy", args.ordering_policy, OrderingPolicy.FIGURE.value)
    try:
        policy = OrderingPolicy(policy_name)
    except ValueError:
        raise ConfigError(f"unknown ordering policy {policy_name!r}") from None
    n_lamb = _parse_n_modes_lamb(
        pick("n_modes_lamb", args.n_modes_lamb, DEFAULT_N_MODES_LAMB)
    )
    fmt = pick("format", args.format, "csv")
    output = str(pick("output", args.output, "-"))
    plot = bool(pick("plot", True if args.plot else None, False))
    if plot and output == "-":
        raise ConfigError("--plot needs --output pointing at a file")

    ctx = make_context(
        g_squared=g2, policy=policy, e_max=max(e_max, 8.0), aspect_ratio=aspect
    )
    config = {
        "e_min": e_min,
        "e_max": e_max,
        "points": points,
        "g_squared": g2,
        "aspect_ratio": aspect,
        "ordering_policy": policy.value,
        "n_modes_lamb": "open" if n_lamb is None else n_lamb,
        "format": fmt,
    }

    step = (e_max - e_min) / (points - 1)
    rows: list[SpectrumRow] = []
    for i in range(points):
        e = e_min + i * step
        n_here = ctx.open_count(e) if n_lamb is None else n_lamb
        try:
            if n_lamb is None and n_here == 0:
                n_here = min(DEFAULT_N_MODES_LAMB, len(ctx.ordering.modes))
            se = self_energy(e, ctx, n_here)
        except CutoffSingularity:
            rows.append(SpectrumRow(e, None, None, None, None, None, None, "cutoff"))
            continue
        except TruncationTooSmall:
            rows.append(
                SpectrumRow(e, None, None, None, None, None, None, "truncation")
            )
            continue
        rows.append(
            SpectrumRow(e, None, None, None, se.delta, se.gamma, se.open_count)
        )

    if fmt == "json":
        payload_rows = [
            {
                "E": r.energy,
                "delta": r.delta,
                "gamma": r.gamma,
                "open_count": r.open_count,
                "flag": r.flag,
            }
            for r in rows
        ]
        _write_text(
            output,
            json.dumps({"config": config, "rows": payload_rows}, indent=2) + "\n",
        )
    else:
        lines = [_config_comment(config), "E,delta,gamma,open_count"]
        for r in rows:
            if r.flag is not None:
                lines.append(f"# flag E={_fmt(r.energy)} reason={r.flag}")
            lines.append(
                ",".join(_fmt(c) for c in [r.energy, r.delta, r.gamma, r.open_count])
            )
        _write_text(output, "\n".join(lines) + "\n")

    if plot:
        from .plotting import plot_self_energy

        plot_self_energy(rows, Path(output).with_suffix(".png"))
    return EXIT_OK


def cmd_reflectance(args) -> int:
    run = resolve_run_config(args, default_n_modes="open")
    if run.plot and run.output == "-":
        raise ConfigError("--plot needs --output pointing at a file")
    rows = scan(run.scan, threads=run.threads)
    peaks = find_peaks(rows)
    config = scan_spec_to_config(run.scan, fmt=run.format)
    if run.format == "json":
        _write_text(run.output, render_spectrum_json(config, rows, peaks))
    else:
        _write_text(run.output, render_spectrum_csv(config, rows, peaks))
    if run.plot:
        from .plotting import plot_reflectance

        label = run.scan.incident.label()
        plot_reflectance(
            [(label, run.scan, rows)], Path(run.output).with_suffix(".png")
        )
    return EXIT_OK


def cmd_channels(args) -> int:
    allowed = {
        "energy", "g_squared", "aspect_ratio", "ordering_policy",
        "e_max", "format", "output",
    }
    file_cfg = _load_config_file(args.config, allowed) if args.config else {}

    def pick(key, flag, fallback):
        return flag if flag is not None else file_cfg.get(key, fallback)

    energy = pick("energy", args.energy, None)
    if energy is None:
        raise ConfigError("channels needs --energy")
    energy = float(energy)
    g2 = float(pick("g_squared", args.g_squared, 0.01))
    aspect = float(pick("aspect_ratio", args.aspect_ratio, 2.0))
    e_max = float(pick("e_max", args.emax, 8.0))
    policy_name = pick("ordering_policy", args.ordering_policy, OrderingPolicy.FIGURE.value)
    try:
        policy = OrderingPolicy(policy_name)
    except ValueError:
        raise ConfigError(f"unknown ordering policy {policy_name!r}") from None
    fmt = pick("format", args.format, "json")
    output = str(pick("output", args.output, "-"))

    ctx = make_context(g_squared=g2, policy=policy, e_max=e_max, aspect_ratio=aspect)
    decomp = channel_decomposition(energy, ctx)
    channels = ctx.channel_set(energy)
    config = {
        "energy": energy,
        "g_squared": g2,
        "aspect_ratio": aspect,
        "e_max": e_max,
        "ordering_policy": policy.value,
        "format": fmt,
    }
    mode_list = [[ch.mode.m, ch.mode.n] for ch in channels.channels]
    if fmt == "json":
        result = {
            "E": energy,
            "open_count": len(channels),
            "modes": mode_list,
            "cc": [a.real for a in decomp.cc.amplitudes],
            "sfc": [[a.real for a in v.amplitudes] for v in decomp.sfc_basis],
        }
        _write_text(output, _render_result_json(config, result))
    else:
        table = []
        for i, ((m, n), a) in enumerate(zip(mode_list, decomp.cc.amplitudes)):
            table.append(["cc", i, m, n, a.real])
        for s, vec in enumerate(decomp.sfc_basis):
            for i, ((m, n), a) in enumerate(zip(mode_list, vec.amplitudes)):
                table.append([f"sfc{s}", i, m, n, a.real])
        _write_text(
            output,
            _render_table_csv(
                config, ["vector", "index", "m", "n", "amplitude"], table
            ),
        )
    return EXIT_OK


def cmd_resonances(args) -> int:
    allowed = {
        "e_min", "e_max", "omega_a", "g_squared", "aspect_ratio",
        "ordering_policy", "n_modes_lamb", "format", "output",
    }
    file_cfg = _load_config_file(args.config, allowed) if args.config else {}

    def pick(key, flag, fallback):
        return flag if flag is not None else file_cfg.get(key, fallback)

    aspect = float(pick("aspect_ratio", args.aspect_ratio, 2.0))
    geom = WaveguideGeometry(aspect_ratio=aspect)
    lo_default = cutoff_frequency(1, 1, geom)
    hi_default = cutoff_frequency(3, 1, geom)
    e_min = float(pick("e_min", args.emin, lo_default))
    e_max = float(pick("e_max", args.emax, hi_default))
    if not e_min < e_max:
        raise ConfigError("resonances needs e_min < e_max")
    omega_a = float(pick("omega_a", args.omega_a, (lo_default + hi_default) / 2.0))
    g2 = float(pick("g_squared", args.g_squared, 0.01))
    policy_name = pick("ordering_policy", args.ordering_policy, OrderingPolicy.FIGURE.value)
    try:
        policy = OrderingPolicy(policy_name)
    except ValueError:
        raise ConfigError(f"unknown ordering policy {policy_name!r}") from None
    n_lamb = _parse_n_modes_lamb(pick("n_modes_lamb", args.n_modes_lamb, "open"))
    fmt = pick("format", args.format, "csv")
    output = str(pick("output", args.output, "-"))

    ctx = make_context(
        g_squared=g2, policy=policy, e_max=max(e_max, 8.0), aspect_ratio=aspect
    )
    result = resonance_energies(
        e_min, e_max, TlsParams(omega_a=omega_a), ctx, n_modes_lamb=n_lamb
    )
    config = {
        "e_min": e_min,
        "e_max": e_max,
        "omega_a": omega_a,
        "g_squared": g2,
        "aspect_ratio": aspect,
        "ordering_policy": policy.value,
        "n_modes_lamb": "open" if n_lamb is None else n_lamb,
        "format": fmt,
    }
    if fmt == "json":
        payload = {
            "roots": list(result.roots),
            "interval": list(result.interval),
            "weak_coupling_estimate": result.weak_coupling_estimate,
        }
        _write_text(output, _render_result_json(config, payload))
    else:
        lines = [_config_comment(config)]
        if result.weak_coupling_estimate is not None:
            lines.append(
                f"# weak_coupling_estimate={_fmt(result.weak_coupling_estimate)}"
            )
        lines.append("index,E_R")
        for i, root in enumerate(result.roots):
            lines.append(f"{i},{_fmt(root)}")
        _write_text(output, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_figure(args) -> int:
    curves = figure_curves(args.name)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    threads = args.threads if args.threads is not None else 1
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    fmt = args.format if args.format is not None else "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {fmt!r}")

    written: list[Path] = []
    rendered: list[tuple[str, ScanSpec, list[SpectrumRow]]] = []
    for label, spec in curves:
        if args.points is not None:
            spec = replace(spec, points=int(args.points))
        rows = scan(spec, threads=threads)
        peaks = find_peaks(rows)
        config = scan_spec_to_config(spec, fmt=fmt)
        ext = "json" if fmt == "json" else "csv"
        path = outdir / f"{label}.{ext}"
        if fmt == "json":
            path.write_text(render_spectrum_json(config, rows, peaks))
        else:
            path.write_text(render_spectrum_csv(config, rows, peaks))
        written.append(path)
        rendered.append((label, spec, rows))

    from .plotting import plot_reflectance

    png = outdir / f"{args.name}.png"
    plot_reflectance(rendered, png, title=args.name)
    written.append(png)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_physical(args) -> int:
    allowed = {
        "target_ghz", "convention", "dimensionless_energy", "aspect_ratio",
        "e_max", "ordering_policy", "format", "output",
    }
    file_cfg = _load_config_file(args.config, allowed) if args.config else {}

    def pick(key, flag, fallback):
        return flag if flag is not None else file_cfg.get(key, fallback)

    target_ghz = pick("target_ghz", args.target_ghz, None)
    if target_ghz is None:
        raise ConfigError("physical needs --target-ghz")
    target_ghz = float(target_ghz)
    conv_name = pick("convention", args.convention, FrequencyConvention.ORDINARY.value)
    try:
        convention = FrequencyConvention(conv_name)
    except ValueError:
        raise ConfigError(f"unknown frequency convention {conv_name!r}") from None
    x = pick("dimensionless_energy", args.dimensionless_energy, None)
    aspect = float(pick("aspect_ratio", args.aspect_ratio, 2.0))
    e_max = float(pick("e_max", args.emax, 8.0))
    policy_name = pick(
        "ordering_policy", args.ordering_policy, OrderingPolicy.PHYSICAL.value
    )
    try:
        policy = OrderingPolicy(policy_name)
    except ValueError:
        raise ConfigError(f"unknown ordering policy {policy_name!r}") from None
    fmt = pick("format", args.format, "csv")
    output = str(pick("output", args.output, "-"))

    geom = WaveguideGeometry(aspect_ratio=aspect)
    try:
        sizing = physical_sizing(
            target=target_ghz * 1e9,
            convention=convention,
            geometry=geom,
            dimensionless_energy=None if x is None else float(x),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ordering = enumerate_modes(geom, e_max, policy)
    report = cutoff_report(sizing, ordering)
    note = (
        "ordinary (Hz) and angular (rad/s) frequencies differ by 2*pi; "
        "both are reported to keep the convention explicit"
    )
    config = {
        "target_ghz": target_ghz,
        "convention": convention.value,
        "dimensionless_energy": sizing.dimensionless_energy,
        "aspect_ratio": aspect,
        "e_max": e_max,
        "ordering_policy": policy.value,
        "format": fmt,
    }
    if fmt == "json":
        result = {
            "a_m": sizing.a_m,
            "b_m": sizing.b_m,
            "a_cm": sizing.a_cm,
            "b_cm": sizing.b_cm,
            "cutoffs": [
                {
                    "m": r.m,
                    "n": r.n,
                    "dimensionless": r.dimensionless,
                    "frequency_ghz": r.frequency_hz / 1e9,
                    "angular_grad_s": r.angular_rad_s / 1e9,
                }
                for r in report
            ],
            "note": note,
        }
        _write_text(output, _render_result_json(config, result))
    else:
        lines = [
            _config_comment(config),
            f"# a_m={_fmt(sizing.a_m)} b_m={_fmt(sizing.b_m)}",
            f"# a_cm={_fmt(sizing.a_cm)} b_cm={_fmt(sizing.b_cm)}",
            f"# note={note}",
            "m,n,dimensionless,frequency_ghz,angular_grad_s",
        ]
        for r in report:
            lines.append(
                ",".join(
                    _fmt(c)
                    for c in [
                        r.m,
                        r.n,
                        r.dimensionless,
                        r.frequency_hz / 1e9,
                        r.angular_rad_s / 1e9,
                    ]
                )
            )
        _write_text(output, "\n".join(lines) + "\n")
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def _add_common(parser, *, with_scan: bool = True) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--aspect", type=float, dest="aspect_ratio",
                        help="wide/narrow side ratio a/b (default 2)")
    parser.add_argument("--policy", dest="ordering_policy",
                        choices=[p.value for p in OrderingPolicy],
                        help="mode ordering policy")
    parser.add_argument("--format", choices=["csv", "json"], help="output format")
    parser.add_argument("--output", "-o", help="output path ('-' = stdout)")
    if with_scan:
        parser.add_argument("--emin", type=float, help="scan lower energy")
        parser.add_argument("--emax", type=float, help="scan upper energy")
        parser.add_argument("--points", type=int, help="number of grid points")
        parser.add_argument("--g2", type=float, dest="g_squared",
                            help="coupling strength g^2")
        parser.add_argument("--n-modes-lamb", dest="n_modes_lamb",
                            help="level-shift mode truncation: integer or 'open'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgqed",
        description=(
            "Single-photon scattering by a two-level emitter coupled to the "
            "TM modes of a rectangular waveguide (energies in units of pi*c/a)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modes", help="tabulate TM mode cutoffs and coupling signs")
    _add_common(p, with_scan=False)
    p.add_argument("--emax", type=float, help="list modes with cutoff below this")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("selfenergy", help="level shift and decay rate over a grid")
    _add_common(p)
    p.add_argument("--plot", action="store_true",
                   help="render a PNG next to the output file")
    p.set_defaults(func=cmd_selfenergy)

    p = sub.add_parser("reflectance", help="reflection/transmission spectrum")
    _add_common(p)
    p.add_argument("--omega-a", type=float, dest="omega_a",
                   help="emitter transition energy")
    p.add_argument("--incident",
                   help="incidence: 'cc', 'tmMN', 'mode:m,n', or 'vector:a,b,...'")
    p.add_argument("--threads", type=int, help="worker threads for the scan")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG next to the output file")
    p.set_defaults(func=cmd_reflectance)

    p = sub.add_parser("channels", help="controllable and scattering-free channels")
    _add_common(p, with_scan=False)
    p.add_argument("--energy", type=float, help="photon energy")
    p.add_argument("--emax", type=float, help="mode enumeration ceiling")
    p.add_argument("--g2", type=float, dest="g_squared", help="coupling strength g^2")
    p.set_defaults(func=cmd_channels)

    p = sub.add_parser("resonances", help="solve E - omega_a - delta(E) = 0")
    _add_common(p)
    p.add_argument("--omega-a", type=float, dest="omega_a",
                   help="emitter transition energy")
    p.set_defaults(func=cmd_resonances)

    p = sub.add_parser("figure", help="run a named preset scan to CSV + PNG")
    p.add_argument("name", help="preset or group name, e.g. fig5a")
    p.add_argument("--outdir", default=".", help="directory for output files")
    p.add_argument("--points", type=int, help="grid points per curve")
    p.add_argument("--threads", type=int, help="worker threads for the scans")
    p.add_argument("--format", choices=["csv", "json"], help="table format")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("physical", help="size a waveguide for a target frequency")
    _add_common(p, with_scan=False)
    p.add_argument("--target-ghz", type=float, dest="target_ghz",
                   help="target frequency in GHz")
    p.add_argument("--convention",
                   choices=[c.value for c in FrequencyConvention],
                   help="how the target is specified")
    p.add_argument("--dimensionless-energy", type=float, dest="dimensionless_energy",
                   help="dimensionless energy placed at the target "
                        "(default: midway between the two lowest coupled cutoffs)")
    p.add_argument("--emax", type=float, help="cutoff report ceiling")
    p.set_defaults(func=cmd_physical)

    return parser


def _print_error(exc: Exception) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UnknownPreset) as exc:
        _print_error(exc)
        return EXIT_CONFIG
    except NonConvergence as exc:
        _print_error(exc)
        return EXIT_NONCONVERGENCE
    except WaveguideError as exc:
        _print_error(exc)
        return EXIT_DOMAIN
    except ValueError as exc:
        _print_error(exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
