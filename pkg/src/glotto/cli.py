"""Command-line pipeline: dist -> tree / embed / date, plus simulate and rerun.

Every value-taking flag can also come from an environment variable
``GLOTTO_<FLAG>`` (e.g. ``GLOTTO_OUT_DIR``) or from the ``--config``
key=value file, in that order of decreasing precedence after the command
line itself.

Exit codes: 0 success, 1 internal or numerical failure, 2 user/input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .chronology import (
    ChronologyModel,
    ConfigError,
    calendar_year,
    calibrate_tau,
    date_from_variance,
    format_calendar_year,
    parse_config,
    random_lexicon,
    simulate_divergence,
    time_matrix,
)
from .geometry import (
    embed,
    radial_variance,
    radial_variance_profile,
    residual_ratio,
    spherical,
)
from .language_distance import (
    PairMatrix,
    distance_matrix,
    external_reference_report,
    format_coverage_csv,
    format_matrix_csv,
    format_phylip,
    format_report_csv,
    read_distance_matrix,
)
from .lexicon import format_corpus, get_policy, read_corpus
from .newick import parse_newick, patristic_distances
from .phylogeny import group_assignments, to_newick, upgma
from .plots import angles_svg, reference_svg

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2

# dest -> (type, default) for options resolvable from env / config
OPTIONS: dict[str, tuple[type, object]] = {
    "out_dir": (str, None),
    "quiet": (bool, False),
    "m_catalog": (int, 200),
    "policy": (str, "default"),
    "min_shared": (int, 1),
    "tau": (float, 1000.0),
    "d_max": (float, 1.0),
    "k_var": (float, None),
    "reference_year": (int, 2000),
    "anchor_root_age": (float, None),
    "group_counts": (str, "2,4"),
    "annotate": (bool, False),
    "dim": (int, None),
    "solver": (str, "jacobi"),
    "groups": (str, None),
    "group_column": (str, None),
    "rate": (float, None),
    "seed": (int, 0),
}


class UsageError(ValueError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _convert(dest: str, raw):
    kind = OPTIONS[dest][0]
    if raw is None or not isinstance(raw, str):
        return raw
    if kind is bool:
        return raw.strip().lower() in {"1", "true", "yes", "on"}
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {dest}") from None


def resolve(args: argparse.Namespace) -> dict:
    """Merge command line, GLOTTO_* environment and config file values."""
    config: dict = {}
    if getattr(args, "config", None):
        config = parse_config(Path(args.config).read_text(encoding="utf-8"))
    params = {}
    for dest in args.option_dests:
        value = getattr(args, dest, None)
        if value is None:
            value = os.environ.get("GLOTTO_" + dest.upper())
        if value is None:
            value = config.get(dest)
        if value is None:
            value = OPTIONS[dest][1]
        params[dest] = _convert(dest, value)
    return params


def _model(params: dict) -> ChronologyModel:
    return ChronologyModel(
        tau=params.get("tau", 1000.0),
        d_max=params.get("d_max", 1.0),
        k_var=params.get("k_var"),
        reference_year=params.get("reference_year", 2000),
    )


def _write(out_dir: Path, name: str, text: str, written: list[str]) -> None:
    with open(out_dir / name, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    written.append(name)


def _write_manifest(out_dir: Path, command: str, inputs: dict[str, str], params: dict, written: list[str]) -> None:
    manifest = {
        "tool": "glotto",
        "version": __version__,
        "command": command,
        "inputs": {
            key: {"path": str(Path(path).resolve()), "sha256": _sha256(Path(path))}
            for key, path in sorted(inputs.items())
        },
        "params": {k: params[k] for k in sorted(params)},
        "outputs": {name: _sha256(out_dir / name) for name in sorted(written)},
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


class Reporter:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def __call__(self, line: str) -> None:
        if not self.quiet:
            print(line)


# --- commands ----------------------------------------------------------------

def cmd_dist(inputs: dict, params: dict, out_dir: Path, say: Reporter) -> list[str]:
    corpus = read_corpus(inputs["corpus"], params["m_catalog"], get_policy(params["policy"]))
    dm = distance_matrix(corpus, params["min_shared"])
    written: list[str] = []
    _write(out_dir, "matrix.csv", format_matrix_csv(dm), written)
    _write(out_dir, "matrix.phy", format_phylip(dm), written)
    _write(out_dir, "coverage.csv", format_coverage_csv(dm), written)
    refs = params.get("reference") or []
    if refs:
        rows = external_reference_report(corpus, refs, dm)
        _write(out_dir, "references.csv", format_report_csv(rows), written)
        _write(out_dir, "references.svg", reference_svg(rows), written)
    say(f"languages: {dm.n}")
    say(f"pairs: {len(dm.entries)}")
    say(f"min coverage: {int(dm.coverage.min())}")
    return written


def _group_counts(text: str, n: int) -> list[int]:
    try:
        counts = sorted({int(tok) for tok in text.split(",") if tok.strip()})
    except ValueError:
        raise UsageError(f"bad --group-counts {text!r}") from None
    return [c for c in counts if 1 <= c <= n]


def cmd_tree(inputs: dict, params: dict, out_dir: Path, say: Reporter) -> list[str]:
    dm = read_distance_matrix(inputs["matrix"])
    model = _model(params)
    if params["anchor_root_age"] is not None:
        model = calibrate_tau(dm, params["anchor_root_age"], model)
    tm = time_matrix(dm, model)
    tree = upgma(tm)
    counts = _group_counts(params["group_counts"], dm.n)
    assignments = {c: group_assignments(tree, c) for c in counts}

    written: list[str] = []
    _write(out_dir, "tree.nwk", to_newick(tree) + "\n", written)
    if params["annotate"] and counts:
        _write(out_dir, "tree_annotated.nwk", to_newick(tree, assignments[counts[-1]]) + "\n", written)
    _write(out_dir, "times.csv", format_matrix_csv(tm), written)
    header = "label" + "".join(f",group{c}" for c in counts)
    lines = [header] + [
        lab + "".join(f",{assignments[c][lab]}" for c in counts) for lab in dm.labels
    ]
    _write(out_dir, "groups.csv", "\n".join(lines) + "\n", written)
    say(f"tau: {model.tau:.6f}")
    say(f"root height: {tree.height:.2f}")
    say(f"root date: {format_calendar_year(calendar_year(round(tree.height, 2), model))}")
    return written


def _read_groups(path: str, column: str | None) -> dict[str, int]:
    rows = [line.split(",") for line in Path(path).read_text(encoding="utf-8").splitlines() if line]
    header, body = rows[0], rows[1:]
    if column is None:
        column = header[-1]
    if column not in header:
        raise UsageError(f"groups file has no column {column!r}")
    k = header.index(column)
    return {row[0]: int(row[k]) for row in body}


def _angle(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def cmd_embed(inputs: dict, params: dict, out_dir: Path, say: Reporter) -> list[str]:
    dm = read_distance_matrix(inputs["matrix"])
    n = params["dim"] if params["dim"] is not None else min(3, dm.n - 1)
    e = embed(dm, n, solver=params["solver"])
    ratio = residual_ratio(e)

    header = "label," + ",".join(f"x{k}" for k in range(1, n + 1)) + ",r"
    points = spherical(e) if n == 3 else None
    if points:
        header += ",theta,phi"
    lines = [header]
    radii = e.radii()
    for idx, label in enumerate(e.labels):
        cells = [f"{v:.6f}" for v in e.coordinates[idx]] + [f"{radii[idx]:.6f}"]
        if points:
            cells += [_angle(points[idx].theta), _angle(points[idx].phi)]
        lines.append(label + "," + ",".join(cells))

    written: list[str] = []
    _write(out_dir, "embedding.csv", "\n".join(lines) + "\n", written)
    _write(out_dir, "spectrum.csv", "eigenvalue\n" + "".join(f"{v:.6f}\n" for v in e.eigenvalues), written)
    if points:
        groups = _read_groups(inputs["groups"], params["group_column"]) if "groups" in inputs else None
        scatter = [(p.label, p.phi, p.theta) for p in points if p.theta is not None]
        _write(out_dir, "angles.svg", angles_svg(scatter, groups), written)
    print(f"residual ratio: {ratio:.6e}")
    say(f"radial variance: {radial_variance(e):.6f}")
    return written


def cmd_date(inputs: dict, params: dict, out_dir: Path | None, say: Reporter) -> list[str]:
    if params.get("k_var") is None:
        raise ConfigError("k_var must be configured (flag --k-var, GLOTTO_K_VAR or config file)")
    model = _model(params)
    dm = read_distance_matrix(inputs["matrix"])
    n = params["dim"] if params["dim"] is not None else dm.n - 1
    e = embed(dm, n, solver=params["solver"])
    variance = radial_variance(e)
    lag = date_from_variance(variance, model)
    profile = radial_variance_profile(e)
    report = [
        f"dimension: {n}",
        f"radial variance: {variance:.6f}",
        "radial variance by dimension: " + " ".join(f"{k}:{v:.6f}" for k, v in enumerate(profile, start=1)),
        f"lag years: {lag:.2f}",
        f"date: {format_calendar_year(calendar_year(round(lag, 2), model))}",
    ]
    text = "\n".join(report) + "\n"
    sys.stdout.write(text)
    written: list[str] = []
    if out_dir is not None:
        _write(out_dir, "date.txt", text, written)
    return written


def cmd_simulate(inputs: dict, params: dict, out_dir: Path, say: Reporter) -> list[str]:
    if params["rate"] is None or not params["rate"] > 0:
        raise UsageError("--rate must be a positive number")
    tree = parse_newick(Path(inputs["tree"]).read_text(encoding="utf-8"))
    rng = np.random.default_rng([params["seed"], 0])
    ancestor = random_lexicon("ancestor", params["m_catalog"], rng)
    corpus = simulate_divergence(ancestor, tree, params["rate"], params["seed"], params["m_catalog"])
    truth = patristic_distances(tree)
    labels = corpus.labels
    square = [[0.0 if a == b else truth[(a, b)] for b in labels] for a in labels]
    written: list[str] = []
    _write(out_dir, "corpus.tsv", format_corpus(corpus), written)
    _write(out_dir, "true_times.csv", format_matrix_csv(PairMatrix.from_square(labels, square)), written)
    say(f"leaves: {len(labels)}")
    return written


COMMANDS = {
    "dist": (cmd_dist, ["corpus"]),
    "tree": (cmd_tree, ["matrix"]),
    "embed": (cmd_embed, ["matrix"]),
    "date": (cmd_date, ["matrix"]),
    "simulate": (cmd_simulate, ["tree"]),
}


def run_command(command: str, inputs: dict, params: dict, out_dir: str | None) -> list[str]:
    fn, _ = COMMANDS[command]
    say = Reporter(params.get("quiet", False))
    target = None
    if out_dir is not None:
        target = Path(out_dir)
        target.mkdir(parents=True, exist_ok=True)
    written = fn(inputs, params, target, say)
    if target is not None:
        _write_manifest(target, command, inputs, params, written)
    return written


def cmd_rerun(manifest_path: str, out_dir: str | None) -> int:
    manifest = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    command = manifest["command"]
    if command not in COMMANDS:
        raise UsageError(f"manifest names unknown command {command!r}")
    inputs = {}
    for key, entry in manifest["inputs"].items():
        path = Path(entry["path"])
        if _sha256(path) != entry["sha256"]:
            raise UsageError(f"input {path} changed since the manifest was written")
        inputs[key] = str(path)
    params = dict(manifest["params"])
    target = str(Path(out_dir or params.get("out_dir") or Path(manifest_path).parent).resolve())
    params["out_dir"] = target
    run_command(command, inputs, params, target)
    mismatched = [
        name for name, digest in manifest["outputs"].items() if _sha256(Path(target) / name) != digest
    ]
    if mismatched:
        print("outputs differ from manifest: " + ", ".join(mismatched), file=sys.stderr)
        return EXIT_INTERNAL
    print(f"reproduced {len(manifest['outputs'])} file(s) in {target}")
    return EXIT_OK


# --- argument parsing -----------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out-dir", help="directory for output files (default: .)")
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--quiet", action="store_const", const=True, default=None)


def _add_chronology(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=float, help="time scale of the log rule in years (2/rate for a per-word replacement rate)")
    p.add_argument("--d-max", type=float, help="saturation distance (default 1)")
    p.add_argument("--reference-year", type=int, help="calendar year of the data (default 2000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glotto", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"glotto {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="word lists -> distance matrix")
    p.add_argument("corpus")
    p.add_argument("--m-catalog", type=int)
    p.add_argument("--policy", choices=["default", "letters", "raw"])
    p.add_argument("--min-shared", type=int)
    p.add_argument("--reference", action="append", help="external reference language (repeatable)")
    _add_common(p)

    p = sub.add_parser("tree", help="distance matrix -> UPGMA tree in years")
    p.add_argument("matrix")
    _add_chronology(p)
    p.add_argument("--anchor-root-age", type=float, help="calibrate tau so the root sits at this age")
    p.add_argument("--group-counts", help="comma-separated clade counts for groups.csv (default 2,4)")
    p.add_argument("--annotate", action="store_const", const=True, default=None)
    _add_common(p)

    p = sub.add_parser("embed", help="distance matrix -> Euclidean embedding")
    p.add_argument("matrix")
    p.add_argument("-n", "--dim", type=int)
    p.add_argument("--solver", choices=["jacobi", "lapack"])
    p.add_argument("--groups", help="groups.csv from 'tree' used to colour angles.svg")
    p.add_argument("--group-column")
    _add_common(p)

    p = sub.add_parser("date", help="radial-variance dating report")
    p.add_argument("matrix")
    p.add_argument("--k-var", type=float, help="years per unit radial variance")
    p.add_argument("--reference-year", type=int)
    p.add_argument("-n", "--dim", type=int, help="embedding dimension (default N-1)")
    p.add_argument("--solver", choices=["jacobi", "lapack"])
    _add_common(p)

    p = sub.add_parser("simulate", help="evolve random word lists down a Newick tree")
    p.add_argument("tree")
    p.add_argument("--rate", type=float, help="replacements per word per year")
    p.add_argument("--seed", type=int)
    p.add_argument("--m-catalog", type=int)
    _add_common(p)

    p = sub.add_parser("rerun", help="re-execute a run from its manifest.json")
    p.add_argument("manifest")
    p.add_argument("--out-dir")
    return parser


_NON_OPTIONS = {"command", "config", "reference", "manifest", "corpus", "matrix", "tree", "option_dests"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rerun":
            return cmd_rerun(args.manifest, args.out_dir)
        _, positional = COMMANDS[args.command]
        args.option_dests = [d for d in vars(args) if d not in _NON_OPTIONS and d in OPTIONS]
        params = resolve(args)
        if args.command == "dist":
            params["reference"] = args.reference or []
        inputs = {key: getattr(args, key) for key in positional}
        if params.get("groups"):
            inputs["groups"] = params.pop("groups")
        # date only writes files when asked to; other commands default to "."
        out_dir = params["out_dir"]
        if out_dir is None and args.command != "date":
            out_dir = "."
        if out_dir is not None:
            out_dir = params["out_dir"] = str(Path(out_dir).resolve())
        run_command(args.command, inputs, params, out_dir)
        return EXIT_OK
    except (ArithmeticError, MemoryError) as exc:
        print(f"glotto: numerical failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"glotto: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
