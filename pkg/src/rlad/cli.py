"""Command-line front end.

Every command resolves its parameters as built-in defaults, then the JSON
``--config`` file, then explicit flags. Outputs are CSV with a header row; a
manifest holding the resolved parameters is written next to every output file
and ``rlad replay MANIFEST`` regenerates the outputs byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _backend, chain, master, mlf, netsim, paretomatch
from .chain import ChainParams
from .errors import ConfigError, DomainError, RladError
from .fpp import METHODS, CountingLaw
from .mlf import MlParams
from .paretomatch import ParetoParams

SCHEMA_VERSION = 1
EXIT_CODES = {
    "usage": 2,
    "config": 3,
    "domain": 4,
    "accuracy": 5,
    "truncation": 5,
    "conditioning": 5,
    "resource": 6,
    "io": 7,
}
FIGURES = ("fig0", "fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "match")
CAPTION_GAMMA = {1.0: 1.0, 0.7: 3.14, 0.5: 4.0}
APPENDIX_GAMMA = {0.7: 4.0, 0.5: 3.14}


# ------------------------------------------------------------------ parameters


def _floats(value) -> list[float]:
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    if isinstance(value, str):
        return [float(v) for v in value.replace(",", " ").split()]
    return [float(value)]


def _links(value):
    if isinstance(value, list):
        return value
    if value == "full":
        return "full"
    return int(value)


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false", "1", "0"):
        return value.lower() in ("true", "1")
    raise ValueError(f"not a boolean: {value!r}")


def _opt_float(value):
    return None if value is None else float(value)


TYPES = {
    "beta": float, "gamma": _opt_float, "z": _floats, "count": int, "seed": int,
    "times": _floats, "n_max": int, "method": str, "tail_tol": float, "paths": int,
    "N": int, "alpha": float, "i": int, "law": str, "delta": _opt_float, "mean": float,
    "horizon": _opt_float, "initial_links": _links, "replicates": int, "event_cap": int,
    "tau_I": float, "tau_H": float, "initial_infected": int, "gridsize": int,
    "refine": _bool, "figure": str, "gamma_source": str,
}

_SIM = {
    "N": 20, "alpha": 0.0, "law": "mittag-leffler", "beta": 1.0, "gamma": 1.0, "delta": None,
    "mean": 1.0, "horizon": None, "initial_links": "full", "times": None, "replicates": 1000,
    "seed": 0, "event_cap": netsim.DEFAULT_EVENT_CAP,
}
REQUIRED = object()

COMMANDS = {
    "mlf eval": {"beta": REQUIRED, "z": REQUIRED},
    "mlf sample": {"beta": REQUIRED, "gamma": 1.0, "count": 1000, "seed": 0},
    "fpp pmf": {"beta": REQUIRED, "gamma": 1.0, "times": REQUIRED, "n_max": 20000,
                "method": "series-derivative", "tail_tol": 1e-8, "paths": 100000, "seed": 0},
    "chain stationary": {"N": REQUIRED, "alpha": 0.0},
    "chain degree": {"N": REQUIRED},
    "solve": {"N": REQUIRED, "beta": REQUIRED, "gamma": 1.0, "alpha": 0.0, "i": REQUIRED,
              "times": REQUIRED, "tail_tol": 1e-8},
    "simulate": dict(_SIM, times=REQUIRED),
    "sis": dict(_SIM, times=REQUIRED, tau_I=0.25, tau_H=1.0, initial_infected=5),
    "match": {"beta": REQUIRED, "gamma": None, "horizon": 2000.0, "gridsize": 200, "refine": False},
    "reproduce": {"figure": REQUIRED, "replicates": None, "seed": 0, "gamma_source": "refined"},
}

HELP = {
    "beta": "Mittag-Leffler order in (0, 1]",
    "gamma": "Mittag-Leffler time scale",
    "z": "arguments (<= 0)",
    "times": "evaluation / record times",
    "N": "number of nodes",
    "alpha": "delay (no-op) probability",
    "i": "initial number of links",
    "law": "waiting-time law: mittag-leffler, pareto or exponential",
    "delta": "Pareto tail exponent in (1, 2)",
    "initial_links": "'full' or a link count placed at random",
    "tau_I": "mean transmission time per S-I link",
    "tau_H": "mean recovery time",
    "gamma_source": "refined, caption or formula",
}


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _line_of(text: str, key: str) -> int | None:
    for k, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line:
            return k
    return None


def load_config(path: str, command: str) -> dict:
    """Parameters from a JSON config file, checked against ``command``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object", line=1)
    version = data.pop("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{path}: unsupported schema_version {version}", "schema_version",
                          _line_of(text, "schema_version"))
    data.pop("command", None)
    allowed = COMMANDS[command]
    out = {}
    for key, value in data.items():
        line = _line_of(text, key)
        if key not in allowed:
            raise ConfigError(f"{path}:{line}: unknown field {key!r} for {command}", key, line)
        try:
            out[key] = TYPES[key](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}:{line}: field {key!r}: {exc}", key, line) from exc
    return out


def resolve(command: str, flags: dict, config_path: str | None) -> dict:
    params = {k: v for k, v in COMMANDS[command].items()}
    if config_path:
        params.update(load_config(config_path, command))
    for key, value in flags.items():
        if key in params:
            try:
                params[key] = TYPES[key](value)
            except (TypeError, ValueError) as exc:
                raise DomainError(f"{_flag(key)}: {exc}", key) from exc
    missing = [k for k, v in params.items() if v is REQUIRED]
    if missing:
        raise ConfigError(f"missing required parameter {_flag(missing[0])}", missing[0])
    return params


# ------------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------- commands


def cmd_mlf_eval(p, workers):
    rows = [(z, mlf.eval_mlf(p["beta"], z)) for z in p["z"]]
    return {"main": csv_text(["z", "value"], rows)}


def cmd_mlf_sample(p, workers):
    rng = np.random.default_rng(p["seed"])
    draws = mlf.sample(MlParams(p["beta"], p["gamma"]), rng, size=p["count"])
    return {"main": csv_text(["value"], ((x,) for x in draws))}


def cmd_fpp_pmf(p, workers):
    if p["method"] not in METHODS:
        raise DomainError(f"unknown method {p['method']!r}; choose from {', '.join(METHODS)}", "method")
    law = CountingLaw(MlParams(p["beta"], p["gamma"]), n_max=p["n_max"], method=p["method"],
                      tail_tol=p["tail_tol"], mc_paths=p["paths"], mc_seed=p["seed"])
    rows = []
    for t in p["times"]:
        cp = law.count_pmf(t)
        rows.extend((t, n, pr) for n, pr in enumerate(cp.probs))
    return {"main": csv_text(["t", "n", "probability"], rows)}


def cmd_chain_stationary(p, workers):
    pi = chain.stationary(ChainParams(p["N"], p["alpha"]))
    return {"main": csv_text(["k", "probability"], enumerate(pi))}


def cmd_chain_degree(p, workers):
    d = chain.degree_distribution(ChainParams(p["N"]))
    return {"main": csv_text(["degree", "probability"], enumerate(d))}


def cmd_solve(p, workers):
    spec = master.SemiMarkovSpec.rlad(ChainParams(p["N"], p["alpha"]), MlParams(p["beta"], p["gamma"]),
                                      tail_tol=p["tail_tol"])
    sol = master.transient_pmf(spec, p["i"], p["times"])
    rows = [(t, j, pr) for t, row in zip(sol.times, sol.probs) for j, pr in enumerate(row)]
    return {"main": csv_text(["t", "j", "probability"], rows)}


def _waiting(p) -> netsim.WaitingLaw:
    if p["law"] == "mittag-leffler":
        return netsim.WaitingLaw.mittag_leffler(MlParams(p["beta"], p["gamma"] if p["gamma"] is not None else 1.0))
    if p["law"] == "pareto":
        return netsim.WaitingLaw.pareto(p["delta"])
    if p["law"] == "exponential":
        return netsim.WaitingLaw.exponential(p["mean"])
    raise DomainError(f"unknown law {p['law']!r}", "law")


def _sim_config(p, epidemic=None) -> netsim.SimConfig:
    horizon = p["horizon"] if p["horizon"] is not None else max(p["times"])
    return netsim.SimConfig(ChainParams(p["N"], p["alpha"]), _waiting(p), horizon, p["initial_links"],
                            epidemic, p["replicates"], p["seed"], p["event_cap"])


def cmd_simulate(p, workers):
    ens = netsim.ensemble(_sim_config(p), p["times"], workers)
    pmf, se = ens.pmf, ens.pmf_se
    rows = [(t, j, pmf[k, j], se[k, j]) for k, t in enumerate(ens.times) for j in range(pmf.shape[1])]
    return {"main": csv_text(["t", "j", "pmf_estimate", "stderr"], rows)}


def _sis_rows(ens):
    return zip(ens.times, ens.mean_links, ens.mean_links_se, ens.prevalence, ens.prevalence_se)


def cmd_sis(p, workers):
    epi = netsim.EpidemicParams(p["tau_I"], p["tau_H"], p["initial_infected"])
    ens = netsim.ensemble(_sim_config(p, epi), p["times"], workers)
    header = ["t", "mean_links", "mean_links_stderr", "mean_prevalence", "prevalence_stderr"]
    return {"main": csv_text(header, _sis_rows(ens))}


def cmd_match(p, workers):
    beta = p["beta"]
    par = ParetoParams(1.0 + beta)
    gamma = p["gamma"] if p["gamma"] is not None else paretomatch.initial_gamma(beta)
    ml = MlParams(beta, gamma)
    summary = {}
    if p["refine"]:
        ref = paretomatch.refine_gamma(ml, par, p["horizon"], p["gridsize"])
        ml = ref.ml
        summary["start_gamma"] = gamma
        summary["start_discrepancy"] = ref.start.discrepancy
        summary["improved"] = ref.improved
    spec = paretomatch.match_quality(ml, par, p["horizon"], p["gridsize"])
    summary.update(spec.summary())
    rows = zip(spec.grid, mlf.survival(ml, spec.grid), paretomatch.pareto_survival(par, spec.grid))
    return {"main": csv_text(["t", "ml_survival", "pareto_survival"], rows), "summary": json_text(summary)}


# ---------------------------------------------------------------- reproduce

FIG0_TIME = 250.0
FIG1_HORIZON = 2000.0


def matched_gamma(beta: float, source: str) -> float:
    """Scale paired with Pareto(1 + beta) for the Fig. 1 runs."""
    if beta == 1.0:
        return 1.0
    if source == "caption":
        return CAPTION_GAMMA[beta]
    if source == "formula":
        return paretomatch.initial_gamma(beta)
    if source == "refined":
        g0 = paretomatch.initial_gamma(beta)
        ref = paretomatch.refine_gamma(MlParams(beta, g0), ParetoParams(1.0 + beta), FIG1_HORIZON)
        return ref.ml.gamma
    raise DomainError(f"unknown gamma_source {source!r}", "gamma_source")


def _ensemble(law, horizon, times, replicates, seed, workers, epidemic=None):
    cfg = netsim.SimConfig(ChainParams(20), law, horizon, "full", epidemic, replicates, seed)
    return netsim.ensemble(cfg, times, workers)


def _fig0(p, workers):
    R = p["replicates"] or 10_000
    out, tv = {}, {}
    for k, beta in enumerate((1.0, 0.7, 0.5)):
        ml = MlParams(beta, 1.0)
        exact = master.transient_pmf(master.SemiMarkovSpec.rlad(ChainParams(20), ml), 190, [FIG0_TIME]).probs[0]
        ens = _ensemble(netsim.WaitingLaw.mittag_leffler(ml), FIG0_TIME, [FIG0_TIME], R, p["seed"] + k, workers)
        rows = zip(range(191), exact, ens.pmf[0], ens.pmf_se[0])
        out[f"fig0_beta{beta:g}.csv"] = csv_text(["j", "exact", "simulated", "stderr"], rows)
        tv[f"{beta:g}"] = master.tv_distance(exact, ens.pmf[0])
    out["fig0_summary.json"] = json_text({"t": FIG0_TIME, "replicates": R, "tv_distance": tv})
    return out


def _fig1_pmf(p, workers, beta):
    R = p["replicates"] or 5000
    binom = chain.stationary(190)
    idx = {1.0: 0, 0.7: 1, 0.5: 2}[beta]
    gamma = matched_gamma(beta, p["gamma_source"])
    ml = _ensemble(netsim.WaitingLaw.mittag_leffler(MlParams(beta, gamma)), FIG1_HORIZON, [FIG1_HORIZON],
                   R, p["seed"] + 10 * idx, workers)
    if beta == 1.0:
        rows = zip(range(191), binom, ml.pmf[0], ml.pmf_se[0])
        return {"fig1a.csv": csv_text(["j", "binomial", "simulated", "stderr"], rows)}
    par = _ensemble(netsim.WaitingLaw.pareto(1.0 + beta), FIG1_HORIZON, [FIG1_HORIZON],
                    R, p["seed"] + 10 * idx + 1, workers)
    rows = zip(range(191), binom, ml.pmf[0], ml.pmf_se[0], par.pmf[0], par.pmf_se[0])
    header = ["j", "binomial", "ml_simulated", "ml_stderr", "pareto_simulated", "pareto_stderr"]
    name = "fig1b.csv" if beta == 0.7 else "fig1c.csv"
    return {name: csv_text(header, rows), name.replace(".csv", "_params.json"): json_text(
        {"beta": beta, "gamma": gamma, "delta": 1.0 + beta, "replicates": R})}


def _fig1d(p, workers):
    times = np.linspace(0.0, FIG1_HORIZON, 201)
    cols = []
    for beta in (1.0, 0.7, 0.5):
        ml = MlParams(beta, matched_gamma(beta, p["gamma_source"]))
        cols.append(master.expected_links_closed_form(ChainParams(20), ml, 190, times))
    rows = zip(times, *cols, np.full(times.size, 95.0))
    return {"fig1d.csv": csv_text(["t", "beta1", "beta0.7", "beta0.5", "reference"], rows)}


def _fig1e(p, workers):
    R = p["replicates"] or 5000
    times = np.linspace(0.0, FIG1_HORIZON, 101)
    epi = netsim.EpidemicParams(0.25, 1.0, 5)
    header, cols = ["t"], []
    runs = [("ml1", netsim.WaitingLaw.mittag_leffler(MlParams(1.0, 1.0)), 0)]
    for idx, beta in ((1, 0.7), (2, 0.5)):
        gamma = matched_gamma(beta, p["gamma_source"])
        runs.append((f"ml{beta:g}", netsim.WaitingLaw.mittag_leffler(MlParams(beta, gamma)), 10 * idx))
        runs.append((f"pareto{1 + beta:g}", netsim.WaitingLaw.pareto(1.0 + beta), 10 * idx + 1))
    for label, law, offset in runs:
        ens = _ensemble(law, FIG1_HORIZON, times, R, p["seed"] + offset, workers, epi)
        header += [f"{label}_prevalence", f"{label}_stderr"]
        cols += [ens.prevalence, ens.prevalence_se]
    return {"fig1e.csv": csv_text(header, zip(times, *cols))}


def _match(p, workers):
    out, summary = {}, {}
    for beta in (0.7, 0.5):
        par = ParetoParams(1.0 + beta)
        g0 = paretomatch.initial_gamma(beta)
        ref = paretomatch.refine_gamma(MlParams(beta, g0), par, FIG1_HORIZON)
        spec = paretomatch.match_quality(MlParams(beta, g0), par, FIG1_HORIZON)
        grid = spec.grid
        rows = zip(grid, paretomatch.pareto_survival(par, grid), mlf.survival(MlParams(beta, g0), grid),
                   mlf.survival(MlParams(beta, APPENDIX_GAMMA[beta]), grid), mlf.survival(ref.ml, grid))
        header = ["t", "pareto_survival", "ml_survival_formula", "ml_survival_caption", "ml_survival_refined"]
        out[f"match_beta{beta:g}.csv"] = csv_text(header, rows)
        summary[f"{beta:g}"] = {
            "formula": spec.summary(),
            "caption": paretomatch.match_quality(MlParams(beta, APPENDIX_GAMMA[beta]), par, FIG1_HORIZON).summary(),
            "refined": ref.result.summary(),
        }
    out["match_summary.json"] = json_text(summary)
    return out


def cmd_reproduce(p, workers):
    fig = p["figure"]
    if fig not in FIGURES:
        raise DomainError(f"unknown figure {fig!r}; choose from {', '.join(FIGURES)}", "figure")
    if p["gamma_source"] not in ("refined", "caption", "formula"):
        raise DomainError(f"unknown gamma_source {p['gamma_source']!r}", "gamma_source")
    if fig == "fig0":
        return _fig0(p, workers)
    if fig == "fig1a":
        return _fig1_pmf(p, workers, 1.0)
    if fig == "fig1b":
        return _fig1_pmf(p, workers, 0.7)
    if fig == "fig1c":
        return _fig1_pmf(p, workers, 0.5)
    if fig == "fig1d":
        return _fig1d(p, workers)
    if fig == "fig1e":
        return _fig1e(p, workers)
    return _match(p, workers)


HANDLERS = {
    "mlf eval": cmd_mlf_eval,
    "mlf sample": cmd_mlf_sample,
    "fpp pmf": cmd_fpp_pmf,
    "chain stationary": cmd_chain_stationary,
    "chain degree": cmd_chain_degree,
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "sis": cmd_sis,
    "match": cmd_match,
    "reproduce": cmd_reproduce,
}


# ------------------------------------------------------------------ plumbing


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _manifest(command, params, files, workers, duration) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "rlad",
        "version": __version__,
        "command": command,
        "config": params,
        "seed": params.get("seed"),
        "outputs": files,
        "execution": {"workers": workers, "backend": _backend.name, "duration_s": round(duration, 3)},
    }


def execute(command: str, params: dict, workers: int | None, out: str | None = None,
            outdir: str | None = None, stdout=None) -> list[str]:
    """Run a resolved command and write its outputs plus manifest; returns written paths."""
    stdout = stdout or sys.stdout
    start = time.perf_counter()
    results = HANDLERS[command](params, workers)
    duration = time.perf_counter() - start
    written = []
    if command == "reproduce":
        base = Path(outdir or ".")
        for name, text in results.items():
            _write(base / name, text)
            written.append(str(base / name))
        manifest_path = base / f"{params['figure']}.manifest.json"
        files = list(results)
    elif out:
        target = Path(out)
        _write(target, results["main"])
        files = [target.name]
        written.append(str(target))
        if "summary" in results:
            summary = target.with_suffix(".summary.json")
            _write(summary, results["summary"])
            files.append(summary.name)
            written.append(str(summary))
        manifest_path = target.with_name(target.name + ".manifest.json")
    else:
        stdout.write(results["main"])
        if "summary" in results:
            stdout.write(results["summary"])
        return written
    _write(manifest_path, json_text(_manifest(command, params, files, workers, duration)))
    written.append(str(manifest_path))
    return written


def replay(manifest_path: str, outdir: str | None, workers: int | None) -> list[str]:
    path = Path(manifest_path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {manifest_path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{manifest_path}:{exc.lineno}: {exc.msg}", line=exc.lineno) from exc
    command = data.get("command")
    if command not in HANDLERS:
        raise ConfigError(f"manifest names unknown command {command!r}", "command")
    params = dict(COMMANDS[command])
    for key, value in data["config"].items():
        if key not in params:
            raise ConfigError(f"manifest field {key!r} not valid for {command}", key)
        params[key] = TYPES[key](value) if value is not None else None
    base = Path(outdir) if outdir else path.parent
    if command == "reproduce":
        return execute(command, params, workers, outdir=str(base))
    return execute(command, params, workers, out=str(base / data["outputs"][0]))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "usage", "message": message}) + "\n")
        raise SystemExit(EXIT_CODES["usage"])


def _add_params(sub: argparse.ArgumentParser, command: str) -> None:
    for name in COMMANDS[command]:
        if name == "figure":
            sub.add_argument("figure", choices=FIGURES)
            continue
        kw = {"dest": name, "default": argparse.SUPPRESS, "help": HELP.get(name)}
        if name in ("z", "times"):
            kw.update(nargs="+", type=float)
        elif name == "refine":
            kw.update(action="store_true", help="golden-section refinement of gamma")
        elif TYPES[name] in (int, float, str):
            kw["type"] = TYPES[name]
        # other values stay strings and are coerced in resolve()
        sub.add_argument(_flag(name), **kw)
    sub.add_argument("--config", help="JSON file with parameters (flags take precedence)")
    sub.add_argument("--workers", type=int, help=f"worker processes (default ${netsim.WORKERS_ENV} or 1)")
    if command == "reproduce":
        sub.add_argument("--outdir", default=".", help="directory for CSV and manifest files")
    else:
        sub.add_argument("--out", help="output CSV path (default: stdout, no manifest)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rlad", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rlad {__version__}")
    subs = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    groups = {}
    for command in COMMANDS:
        head, _, tail = command.partition(" ")
        if tail:
            if head not in groups:
                g = subs.add_parser(head, help=f"{head} operations")
                groups[head] = g.add_subparsers(dest="sub", required=True, parser_class=_Parser)
            sp = groups[head].add_parser(tail)
        else:
            sp = subs.add_parser(head)
        sp.set_defaults(command=command)
        _add_params(sp, command)
    rp = subs.add_parser("replay", help="regenerate the outputs recorded in a manifest")
    rp.add_argument("manifest")
    rp.add_argument("--outdir")
    rp.add_argument("--workers", type=int)
    rp.set_defaults(command="replay")
    return parser


def _error(exc: Exception, category: str) -> int:
    payload = {"error": category, "message": str(exc)}
    for attr in ("parameter", "field", "line", "replicate"):
        value = getattr(exc, attr, None)
        if value is not None:
            payload[attr] = value
    sys.stderr.write(json.dumps(payload) + "\n")
    return EXIT_CODES.get(category, 1)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            replay(args.manifest, args.outdir, args.workers)
            return 0
        flags = {k: v for k, v in vars(args).items() if k in COMMANDS[args.command]}
        params = resolve(args.command, flags, args.config)
        for key, value in params.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise DomainError(f"{key} must be finite", key)
        execute(args.command, params, args.workers, out=getattr(args, "out", None),
                outdir=getattr(args, "outdir", None))
    except RladError as exc:
        return _error(exc, exc.category)
    except OSError as exc:
        return _error(exc, "io")
    return 0


if __name__ == "__main__":
    sys.exit(main())
