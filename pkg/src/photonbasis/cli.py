"""Command-line interface.

Usage:
    photonbasis basis-table --n 2..4 --j 1 --k-max 10 --k-points 100 --out table.csv
    photonbasis gram --n-max 6 --order 200 --out gram.csv
    photonbasis nodes --order 200 --out nodes.csv
    photonbasis project --input spectrum.csv --n-max 20 --out coeffs.csv
    photonbasis project --input spectrum.csv --alpha 2 --out dilated.csv
    photonbasis timetrace --n 2 --j 1 --r 5 --kind all --out trace.csv

Data goes to the file named by --out; diagnostics go to stderr. Every
command is deterministic.
"""

import argparse
import csv
import io
import json
import math
import sys
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .basis import ScaleConfig, c_multipolar, check_nj, enumerate_basis
from .exceptions import ConfigError, DomainError, GridMismatchError
from .hilbert import MAX_ORDER, MIN_ORDER, SpectralChannel, energy, gauss_laguerre_rule, gram_matrix, photon_number
from .projection import project, residual
from .timedomain import KINDS, KernelSpec, ct_grid, wavelet_scan

FORMATS = ("csv", "json")


def fmt_float(x):
    return format(float(x), ".17g")


@dataclass
class RunConfig:
    command: str
    out: str
    fmt: str = "csv"
    k0: float = 1.0
    n_max: int = 6
    order: int = 200
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.fmt not in FORMATS:
            raise ConfigError("format", f"must be one of {FORMATS}")
        if not (math.isfinite(self.k0) and self.k0 > 0):
            raise ConfigError("k0", f"must be positive and finite, got {self.k0}")
        if not MIN_ORDER <= self.order <= MAX_ORDER:
            raise ConfigError("order", f"must lie in [{MIN_ORDER}, {MAX_ORDER}], got {self.order}")
        if not self.out:
            raise ConfigError("out", "an output path is required")
        check = getattr(self, f"_validate_{self.command.replace('-', '_')}", None)
        if check is not None:
            check()
        return self

    def _validate_basis_table(self):
        p = self.params
        for n in p["n"]:
            for j in p["j"]:
                try:
                    check_nj(n, j)
                except DomainError as exc:
                    raise ConfigError("n/j", str(exc)) from None
        if p["k_points"] < 1:
            raise ConfigError("k-points", "must be at least 1")
        if not (0 <= p["k_min"] <= p["k_max"]):
            raise ConfigError("k-min", "need 0 <= k-min <= k-max")

    def _validate_gram(self):
        if self.n_max < 2:
            raise ConfigError("n-max", f"must be >= 2, got {self.n_max}")
        if not self.params["lambdas"] or any(lam not in (-1, 1) for lam in self.params["lambdas"]):
            raise ConfigError("lambda", "helicities must be +1 or -1")

    def _validate_project(self):
        if self.n_max < 2:
            raise ConfigError("n-max", f"must be >= 2, got {self.n_max}")
        if not self.params.get("input"):
            raise ConfigError("input", "an input spectrum file is required")
        alpha = self.params.get("alpha", 1.0)
        if not (math.isfinite(alpha) and alpha > 0):
            raise ConfigError("alpha", f"must be positive and finite, got {alpha}")

    def _validate_timetrace(self):
        p = self.params
        if self.k0 != 1.0:
            raise ConfigError("k0", "time traces are computed at k0 = 1 1/m only")
        if p["kind"] not in KINDS + ("all",):
            raise ConfigError("kind", f"must be one of {KINDS + ('all',)}")
        if p["ct_step"] <= 0:
            raise ConfigError("ct-step", "must be positive")
        if p["r"] < 0 or not math.isfinite(p["r"]):
            raise ConfigError("r", "must be finite and nonnegative")
        if p["r"] == 0 and p["kind"] != "regular":
            raise ConfigError("r", "incoming and outgoing kernels are irregular at r = 0")
        l = p["l"] if p["l"] is not None else p["j"]
        try:
            KernelSpec(p["n"], p["j"], l, "regular", p["r"])
        except DomainError as exc:
            raise ConfigError("n/j/l", str(exc)) from None


class Table:
    """Column names with units, rows, and trailing summary items."""

    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []
        self.summary = OrderedDict()

    def render(self, fmt):
        if fmt == "json":
            doc = OrderedDict(columns=self.columns, rows=[[_json_value(v) for v in row] for row in self.rows])
            if self.summary:
                doc["summary"] = OrderedDict((k, _json_value(v)) for k, v in self.summary.items())
            return json.dumps(doc, indent=1) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_csv_value(v) for v in row])
        for key, value in self.summary.items():
            buf.write(f"# {key},{_csv_value(value)}\n")
        return buf.getvalue()


def _csv_value(v):
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _write(table, config):
    text = table.render(config.fmt)
    try:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError("out", f"cannot write {config.out}: {exc.strerror}") from None


def cmd_basis_table(config):
    p = config.params
    scale = ScaleConfig(k0=config.k0)
    ks = np.linspace(p["k_min"], p["k_max"], p["k_points"])
    table = Table(["n", "j", "k [1/m]", "c_nj [m]"])
    for n in p["n"]:
        for j in p["j"]:
            values = np.atleast_1d(c_multipolar(n, j, ks, scale))
            for k, v in zip(ks, values):
                table.rows.append((n, j, float(k), float(v)))
    _write(table, config)
    return table


def cmd_gram(config):
    rule = gauss_laguerre_rule(config.order, config.k0)
    indices = enumerate_basis(config.n_max, config.params["lambdas"])
    g = gram_matrix(indices, rule, ScaleConfig(k0=config.k0))
    labels = [idx.label() for idx in indices]
    table = Table(["index [n|j|m|lambda]"] + labels)
    for label, row in zip(labels, g):
        table.rows.append([label] + [float(v) for v in row])
    off = g - np.diag(np.diag(g))
    table.summary["max_offdiag_abs"] = float(np.max(np.abs(off))) if g.size else 0.0
    table.summary["max_diag_dev"] = float(np.max(np.abs(np.diag(g) - 1.0))) if g.size else 0.0
    table.summary["dimension"] = len(indices)
    _write(table, config)
    return table


def cmd_nodes(config):
    rule = gauss_laguerre_rule(config.order, config.k0)
    table = Table(["i", "k [1/m]", "weight [1/m^2]"])
    for i, (k, w) in enumerate(zip(rule.nodes, rule.weights)):
        table.rows.append((i, float(k), float(w)))
    _write(table, config)
    return table


SPECTRUM_COLUMNS = ("j", "m", "lambda", "k", "re", "im")


def read_spectrum(path):
    """Parse a spectrum CSV with columns j, m, lambda, k, re, im.

    Returns ``{(j, m, lam): (k_array, complex_values)}`` in file order.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigError("input", f"cannot read {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ConfigError("input", f"{path}: empty file") from None
        for col in SPECTRUM_COLUMNS:
            if col not in header:
                raise ConfigError("input", f"{path}: missing column '{col}'")
        pos = {col: header.index(col) for col in SPECTRUM_COLUMNS}
        channels = OrderedDict()
        for lineno, row in enumerate(reader, start=2):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) < len(header):
                raise ConfigError("input", f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}")
            parsed = {}
            for col in SPECTRUM_COLUMNS:
                text = row[pos[col]].strip()
                try:
                    parsed[col] = int(text) if col in ("j", "m", "lambda") else float(text)
                except ValueError:
                    raise ConfigError("input", f"{path}: line {lineno}: cannot parse {text!r} in column '{col}'") from None
            label = (parsed["j"], parsed["m"], parsed["lambda"])
            ks, vals = channels.setdefault(label, ([], []))
            ks.append(parsed["k"])
            vals.append(complex(parsed["re"], parsed["im"]))
    return OrderedDict((label, (np.array(ks), np.array(vals))) for label, (ks, vals) in channels.items())


def cmd_project(config):
    # With --alpha the input is dilated first, so it must be sampled on the
    # nodes for k0*alpha; the dilated grid then lands on the k0 nodes.
    alpha = config.params.get("alpha", 1.0)
    rule = gauss_laguerre_rule(config.order, config.k0)
    input_rule = rule if alpha == 1.0 else gauss_laguerre_rule(config.order, config.k0 * alpha)
    scale = ScaleConfig(k0=config.k0)
    raw = read_spectrum(config.params["input"])
    channels = []
    for (j, m, lam), (ks, vals) in raw.items():
        try:
            ch = SpectralChannel(j, m, lam, ks, vals)
        except DomainError as exc:
            raise ConfigError("input", str(exc)) from None
        if not input_rule.matches(ch.k):
            raise ConfigError(
                "input",
                f"channel {(j, m, lam)} is not sampled on the order-{input_rule.order} nodes for k0={input_rule.k0} "
                "(see the 'nodes' command)",
            )
        if alpha != 1.0:
            ch = SpectralChannel(j, m, lam, rule.nodes, alpha * ch.values)
        channels.append(ch)
    coeffs = project(channels, config.n_max, rule, scale)
    res, res_raw = residual(channels, coeffs, rule, return_raw=True)
    table = Table(["n", "j", "m", "lambda", "re", "im", "abs2"])
    for idx, v in coeffs.entries.items():
        table.rows.append((idx.n, idx.j, idx.m, idx.lam, v.real, v.imag, abs(v) ** 2))
    e = energy(channels, rule, scale)
    table.summary["photon_number"] = photon_number(channels, rule)
    table.summary["coefficient_norm_squared"] = coeffs.norm_squared()
    table.summary["residual"] = res
    table.summary["residual_raw"] = res_raw
    table.summary["energy [J]"] = e
    table.summary["energy [hbar c0 k0]"] = e / scale.energy_quantum
    _write(table, config)
    return table


def cmd_timetrace(config):
    p = config.params
    l = p["l"] if p["l"] is not None else p["j"]
    grid = ct_grid(p["ct_min"], p["ct_max"], p["ct_step"])
    kinds = KINDS if p["kind"] == "all" else (p["kind"],)
    traces = {kind: wavelet_scan(KernelSpec(p["n"], p["j"], l, kind, p["r"]), grid) for kind in kinds}
    columns = ["ct [m]"]
    for kind in kinds:
        columns += [f"{kind}_re", f"{kind}_im", f"{kind}_abs"]
    if p["kind"] == "all":
        columns.append("in+out-regular_abs")
    table = Table(columns)
    for i, ct in enumerate(grid):
        row = [float(ct)]
        for kind in kinds:
            v = traces[kind].values[i]
            row += [v.real, v.imag, abs(v)]
        if p["kind"] == "all":
            row.append(abs(traces["incoming"].values[i] + traces["outgoing"].values[i] - traces["regular"].values[i]))
        table.rows.append(row)
    _write(table, config)
    return table


COMMANDS = {
    "basis-table": cmd_basis_table,
    "gram": cmd_gram,
    "nodes": cmd_nodes,
    "project": cmd_project,
    "timetrace": cmd_timetrace,
}


def int_list(text):
    """Parse '2,3,4', '2..4' or a mix such as '2..4,7'."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list {text!r}")
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k0", type=float, default=1.0, help="reference wavenumber [1/m]")
    common.add_argument("--n-max", type=int, default=6)
    common.add_argument("--order", type=int, default=200, help="Gauss-Laguerre order")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--out", required=True, help="output file")

    parser = argparse.ArgumentParser(prog="photonbasis", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis-table", parents=[common], help="tabulate c_nj(k)")
    p.add_argument("--n", type=int_list, default=[2, 3, 4])
    p.add_argument("--j", type=int_list, default=[1])
    p.add_argument("--k-min", type=float, default=0.0)
    p.add_argument("--k-max", type=float, default=10.0)
    p.add_argument("--k-points", type=int, default=100)

    p = sub.add_parser("gram", parents=[common], help="Gram matrix of the basis up to n-max")
    p.add_argument("--lambda", dest="lambdas", type=int, action="append", help="helicity (repeatable)")

    sub.add_parser("nodes", parents=[common], help="quadrature nodes on which spectra are sampled")

    p = sub.add_parser("project", parents=[common], help="expand a sampled spectrum")
    p.add_argument("--input", required=True, help="CSV with columns j,m,lambda,k,re,im")
    p.add_argument("--alpha", type=float, default=1.0, help="dilate the input by alpha before projecting")

    p = sub.add_parser("timetrace", parents=[common], help="radial-temporal kernels at fixed r")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--m", type=int, default=0, help="accepted for symmetry; kernels do not depend on m")
    p.add_argument("--lambda", dest="lam", type=int, default=1, help="accepted for symmetry; kernels do not depend on it")
    p.add_argument("--l", type=int, default=None, help="defaults to j")
    p.add_argument("--r", type=float, default=5.0)
    p.add_argument("--ct-min", type=float, default=-15.0)
    p.add_argument("--ct-max", type=float, default=15.0)
    p.add_argument("--ct-step", type=float, default=0.05)
    p.add_argument("--kind", default="all")
    return parser


def config_from_args(args):
    skip = {"command", "out", "format", "k0", "n_max", "order"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    if args.command == "gram" and not params.get("lambdas"):
        params["lambdas"] = [-1, 1]
    return RunConfig(args.command, args.out, args.format, args.k0, args.n_max, args.order, params)


def run(config):
    config.validate()
    return COMMANDS[config.command](config)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run(config_from_args(args))
    except (ConfigError, DomainError, GridMismatchError) as exc:
        print(f"photonbasis: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
