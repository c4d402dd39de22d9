"""Command-line entry point: ``multiportlab <subcommand> [options]``.

Settings resolve in the order defaults < config file < ``MPLAB_*``
environment variables < flags. The config file is ``multiportlab.toml``
in the working directory, else in the home directory; it holds plain
``key = value`` pairs (``tolerance``, ``samples``, ``out_dir``, ``seed``).

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import chain, experiment, hamiltonian, multiport, scattering, su3
from .core import principal_log_hamiltonian, unitarity_residual
from .errors import MultiportError

CONFIG_NAME = "multiportlab.toml"
ENV_PREFIX = "MPLAB_"


@dataclass(frozen=True)
class CliConfig:
    tolerance: float = 1e-10
    samples: int = 256
    out_dir: str | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 3:
            raise ValueError("samples must be at least 3")


_CONFIG_TYPES = {"tolerance": float, "samples": int, "out_dir": str, "seed": int}


def find_config(cwd: Path | None = None, home: Path | None = None) -> Path | None:
    for base in (cwd or Path.cwd(), home or Path.home()):
        p = base / CONFIG_NAME
        if p.is_file():
            return p
    return None


def load_config(path: Path | None = None, environ=None) -> CliConfig:
    values = {}
    if path is not None:
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ValueError(f"{path}: {exc}") from None
        for key, val in raw.items():
            if key not in _CONFIG_TYPES:
                raise ValueError(f"{path}: unknown setting {key!r}")
            values[key] = val
    environ = os.environ if environ is None else environ
    for key in _CONFIG_TYPES:
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = env
    try:
        typed = {k: _CONFIG_TYPES[k](v) for k, v in values.items()}
    except (TypeError, ValueError):
        raise ValueError(f"bad config value in {values}") from None
    return CliConfig(**typed)


# --- serialisation -----------------------------------------------------------

def num(x) -> str:
    """17-significant-digit literal; non-finite values become ``null``."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Small JSON writer with fixed 17-digit floats and sorted keys."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{_str(str(k))}: {dumps(v, indent + 1)}' for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return num(obj)
    if isinstance(obj, str):
        return _str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _str(s: str) -> str:
    import json

    return json.dumps(s)


def matrix_doc(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"shape": list(M.shape), "real": M.real, "imag": M.imag}


def matrix_csv(M) -> str:
    M = np.asarray(M, dtype=complex)
    rows = [["row", "col", "re", "im"]]
    for (i, j), z in np.ndenumerate(M):
        rows.append([i, j, num(z.real), num(z.imag)])
    return _csv(rows)


def vector_csv(v, name: str = "index") -> str:
    v = np.asarray(v, dtype=complex)
    return _csv([[name, "re", "im"]] + [[i, num(z.real), num(z.imag)] for i, z in enumerate(v)])


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _table_csv(records: list[dict], columns: list[str]) -> str:
    return _csv([columns] + [[num(r[c]) if isinstance(r[c], float) else r[c] for c in columns] for r in records])


# --- subcommands -------------------------------------------------------------

def _emit(args, cfg: CliConfig, csv_text, json_obj) -> None:
    fmt = args.format or ("csv" if args.out and args.out.lower().endswith(".csv") else "json")
    text = (csv_text() if callable(csv_text) else csv_text) if fmt == "csv" else dumps(json_obj) + "\n"
    if args.out:
        path = Path(args.out)
        if not path.is_absolute() and cfg.out_dir:
            path = Path(cfg.out_dir) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _unitary_for(kind: str, n: int):
    if kind == "strict3":
        return multiport.strict_three_port()
    return multiport.grover_unitary(n)


def cmd_unitary(args, cfg):
    U = _unitary_for(args.kind, args.n)
    doc = matrix_doc(U)
    doc["unitarity_residual"] = unitarity_residual(U)
    _emit(args, cfg, lambda: matrix_csv(U), doc)


def cmd_strict3(args, cfg):
    U = multiport.strict_three_port()
    probs = [multiport.exit_probabilities(U, p).probabilities for p in range(3)]
    doc = matrix_doc(U)
    doc["exit_probabilities"] = probs
    _emit(args, cfg, lambda: matrix_csv(U), doc)


def cmd_scatter(args, cfg):
    phases = [float(x) for x in args.phases.split(",")]
    prof = scattering.PROFILES[args.profile]
    S = scattering.effective_smatrix(scattering.build_unbiased_three_port(phases, prof))
    doc = matrix_doc(S)
    doc.update(profile=prof.name, phases=phases, unitarity_residual=unitarity_residual(S))
    _emit(args, cfg, lambda: matrix_csv(S), doc)


def cmd_hamiltonian(args, cfg):
    U = _unitary_for(args.kind, args.n)
    if args.double:
        H = hamiltonian.reversible_double(U, cfg.tolerance).matrix
    else:
        H = principal_log_hamiltonian(U, args.time_step, cfg.tolerance, allow_branch_cut=args.allow_branch_cut)
    doc = matrix_doc(H)
    doc["energies"] = np.linalg.eigvalsh(H)
    _emit(args, cfg, lambda: matrix_csv(H), doc)


def _samples(args, cfg):
    return cfg.samples if args.samples is None else args.samples


def cmd_bands(args, cfg):
    bands = chain.band_structure(args.source, _samples(args, cfg), N=args.N)
    doc = {"source": bands.source,
           "bands": [{"k": k, "energies": row} for k, row in zip(bands.k_grid, bands.energies)]}
    _emit(args, cfg, bands.to_csv, doc)


def cmd_crossings(args, cfg):
    bands = chain.band_structure(args.source, _samples(args, cfg), N=args.N)
    pts = chain.crossing_points(bands, tol=args.tol)
    _emit(args, cfg, lambda: _csv([["k"]] + [[num(k)] for k in pts]), {"source": bands.source, "crossings": pts})


def _read_matrix(path: str):
    import json

    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    re = np.asarray(doc["real"], dtype=float)
    im = np.asarray(doc.get("imag", np.zeros_like(re)), dtype=float)
    return re + 1j * im


def cmd_decompose(args, cfg):
    if args.algebra == "su2":
        if not args.matrix:
            raise ValueError("su2 needs --matrix")
        c = su3.su2_decompose(_read_matrix(args.matrix), cfg.tolerance)
        rec = {"d0": c.d0, "dx": c.dx, "dy": c.dy, "dz": c.dz}
        _emit(args, cfg, lambda: _table_csv([rec], ["d0", "dx", "dy", "dz"]), rec)
        return
    if args.matrix:
        records = [su3.su3_decompose(_read_matrix(args.matrix), cfg.tolerance).as_dict()]
        cols = ["d0"] + [f"d{j}" for j in range(1, 9)]
    elif args.k is not None:
        records = [{"k": args.k, **su3.su3_decompose(chain.bloch_hamiltonian(args.k)).as_dict()}]
        cols = ["k", "d0"] + [f"d{j}" for j in range(1, 9)]
    else:
        records = su3.bloch_coefficients(_samples(args, cfg))
        cols = ["k", "d0"] + [f"d{j}" for j in range(1, 9)]
    _emit(args, cfg, lambda: _table_csv(records, cols), records)


def _parse_input(text: str):
    kind, _, idx = text.partition(":")
    if kind not in ("port", "mode") or not idx:
        raise argparse.ArgumentTypeError("--input must be port:<i> or mode:<i>")
    try:
        return kind, int(idx)
    except ValueError:
        raise argparse.ArgumentTypeError("--input index must be an integer") from None


def cmd_evolve(args, cfg):
    kind, idx = args.input
    if args.network:
        from .netspec import compile_evolution, injection_state, parse_network, run_walk

        spec = parse_network(Path(args.network).read_bytes())
        M, basis = compile_evolution(spec)
        if kind == "port":
            psi0 = injection_state(basis, idx)
        else:
            if not 0 <= idx < len(basis):
                raise ValueError(f"mode {idx} out of range (basis size {len(basis)})")
            psi0 = np.zeros(len(basis), dtype=complex)
            psi0[idx] = 1.0
        res = run_walk(M, basis, psi0, args.steps, absorbing=not args.no_absorb)
        p = res.by_port()
        extra = {"absorbed": float(res.absorbed.sum()), "in_flight": float(np.sum(np.abs(res.state) ** 2))}
    else:
        U = multiport.grover_unitary(args.n)
        psi0 = np.zeros(args.n, dtype=complex)
        psi0[multiport.resolve_port(idx, args.n)] = 1.0
        psi = experiment.transition_amplitudes(U, psi0, args.steps)
        p = np.abs(psi) ** 2
        extra = {"amplitudes": {"real": psi.real, "imag": psi.imag}}
    dist = multiport.ExitDistribution(idx if kind == "port" else None, p / p.sum())
    doc = {"steps": args.steps, "probabilities": dist.probabilities, **extra}
    rows = [["port", "probability"]] + [[i, num(x)] for i, x in enumerate(dist.probabilities)]
    if args.shots:
        seed = cfg.seed if args.seed is None else args.seed
        rec = experiment.sample_shots(dist, args.shots, seed, args.stream)
        doc["shots"] = rec.as_dict()
        rows = [["port", "probability", "count"]] + [[i, num(x), c] for i, (x, c)
                                                      in enumerate(zip(dist.probabilities, rec.counts))]
    _emit(args, cfg, lambda: _csv(rows), doc)


def cmd_prepare(args, cfg):
    if args.state == "position":
        v = experiment.prepare_position(args.site, args.N)
    elif args.state == "momentum":
        v = hamiltonian.momentum_state(args.k, args.N).vector
    else:
        v = experiment.w_state(args.n).amplitudes
    _emit(args, cfg, lambda: vector_csv(v), {"state": args.state, "real": v.real, "imag": v.imag})


def cmd_report(args, cfg):
    rep = chain.consistency_report(N=args.N, samples=_samples(args, cfg), crossing_tol=args.tol)
    rows = rep["rows"]
    cols = list(rows[0].keys()) if rows else ["k"]

    def as_csv():
        flat = [[num(r[c]) if isinstance(r[c], (float, np.floating)) else
                 ";".join(num(x) for x in r[c]) if isinstance(r[c], (list, tuple, np.ndarray)) else r[c]
                 for c in cols] for r in rows]
        return _csv([cols] + flat)

    _emit(args, cfg, as_csv, rep)


def cmd_validate(args, cfg):
    from .netspec import NetspecError, parse_network

    text = Path(args.file).read_bytes()
    try:
        parse_network(text)
        diags = []
    except NetspecError as exc:
        diags = [d.as_dict() for d in exc.diagnostics] or [{"code": exc.code, "message": str(exc), "where": []}]
    doc = {"file": args.file, "valid": not diags, "diagnostics": diags}
    _emit(args, cfg, lambda: _csv([["code", "message"]] + [[d["code"], d["message"]] for d in diags]), doc)
    for d in diags:
        print(f"{args.file}: {d['code']}: {d['message']}", file=sys.stderr)
    return 1 if diags else 0


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multiportlab", description="Directionally-unbiased multiport simulations.")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.add_argument("--format", choices=("csv", "json"),
                        help="output format (default: csv when --out ends in .csv, else json)")
        sp.add_argument("--out", help="write to this file instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    sp = add("unitary", cmd_unitary, "Print a multiport unitary.")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--kind", choices=("grover", "strict3"), default="grover")

    add("strict3", cmd_strict3, "Strictly unbiased three-port and its exit probabilities.")

    sp = add("scatter", cmd_scatter, "Solve the splitter/vertex-unit construction for given vertex phases.")
    sp.add_argument("--phases", default=",".join([repr(-3 * np.pi / 4)] * 3),
                    help="comma-separated vertex phases in radians, e.g. --phases=-0.5,0,0.5 (default -3pi/4 each)")
    sp.add_argument("--profile", choices=sorted(scattering.PROFILES), default="calibrated")

    sp = add("hamiltonian", cmd_hamiltonian, "Principal Hamiltonian i ln U, or the time-reversal double.")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--kind", choices=("grover", "strict3"), default="grover")
    sp.add_argument("--time-step", type=float, default=1.0)
    sp.add_argument("--double", action="store_true", help="emit [[0, U^dagger], [U, 0]] instead")
    sp.add_argument("--allow-branch-cut", action="store_true")

    for name, fn, help_ in (("bands", cmd_bands, "Sample the chain band structure."),
                            ("crossings", cmd_crossings, "Locate band crossings.")):
        sp = add(name, fn, help_)
        sp.add_argument("--source", default="closed-form", choices=("closed-form", "numerical", "chain"))
        sp.add_argument("--samples", type=int)
        sp.add_argument("--N", type=int, default=16, help="ring size for --source chain")
        if name == "crossings":
            sp.add_argument("--tol", type=float, default=1e-6)

    sp = add("decompose", cmd_decompose, "Pauli or Gell-Mann coefficients.")
    sp.add_argument("algebra", choices=("su2", "su3"))
    sp.add_argument("--matrix", help="JSON file with 'real' and 'imag' arrays")
    sp.add_argument("--k", type=float, help="decompose the Bloch Hamiltonian at this k")
    sp.add_argument("--samples", type=int)

    sp = add("evolve", cmd_evolve, "Run a walk on a multiport or a network file.")
    sp.add_argument("--network", help="network description (JSON)")
    sp.add_argument("--n", type=int, default=3, help="multiport size when no --network is given")
    sp.add_argument("--input", type=_parse_input, default=("port", 0), help="port:<i> or mode:<i>")
    sp.add_argument("--steps", type=int, default=1)
    sp.add_argument("--shots", type=int, default=0)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--no-absorb", action="store_true", help="keep light at detectors in flight")

    sp = add("prepare", cmd_prepare, "Prepare a position, momentum or W state.")
    sp.add_argument("state", choices=("position", "momentum", "w"))
    sp.add_argument("--site", type=int, default=0)
    sp.add_argument("--N", type=int, default=3)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=3)

    sp = add("report", cmd_report, "Chain consistency report.")
    sp.add_argument("--N", type=int, default=12)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = add("validate", cmd_validate, "Validate a network description.")
    sp.add_argument("file")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(find_config())
        if getattr(args, "steps", 0) is not None and getattr(args, "steps", 0) < 0:
            raise ValueError("--steps must be non-negative")
        rc = args.func(args, cfg)
        return int(rc or 0)
    except (MultiportError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"multiportlab {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
