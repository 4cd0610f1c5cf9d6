import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from photonbasis import c_multipolar, gauss_laguerre_rule
from photonbasis.cli import main


def read_csv(path):
    lines = path.read_text().splitlines()
    data = [l for l in lines if not l.startswith("#")]
    summary = dict(l[2:].rsplit(",", 1) for l in lines if l.startswith("# "))
    rows = list(csv.reader(data))
    return rows[0], rows[1:], {k: float(v) for k, v in summary.items()}


def write_spectrum(path, channels, header=("j", "m", "lambda", "k", "re", "im")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for (j, m, lam), (ks, vals) in channels.items():
            for k, v in zip(ks, vals):
                w.writerow([j, m, lam, repr(float(k)), repr(float(np.real(v))), repr(float(np.imag(v)))])


def test_basis_table_rows_and_zero(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["basis-table", "--n", "2..4", "--j", "1", "--k-points", "100", "--out", str(out)]) == 0
    header, rows, _ = read_csv(out)
    assert header == ["n", "j", "k [1/m]", "c_nj [m]"]
    assert len(rows) == 300
    assert all(float(r[3]) == 0.0 for r in rows if float(r[2]) == 0.0)
    first = next(r for r in rows if r[0] == "3" and float(r[2]) > 1)
    assert float(first[3]) == pytest.approx(c_multipolar(3, 1, float(first[2])), rel=1e-15)


def test_basis_table_json(tmp_path):
    out = tmp_path / "table.json"
    assert main(["basis-table", "--n", "2,3", "--k-points", "5", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["columns"][2] == "k [1/m]"
    assert len(doc["rows"]) == 10


def test_gram_summary(tmp_path):
    out = tmp_path / "gram.csv"
    assert main(["gram", "--n-max", "6", "--order", "200", "--out", str(out)]) == 0
    header, rows, summary = read_csv(out)
    assert summary["max_offdiag_abs"] < 1e-10
    assert summary["max_diag_dev"] < 1e-10
    assert summary["dimension"] == 2 * sum(n * n - 1 for n in range(2, 7))
    g = np.array([[float(v) for v in r[1:]] for r in rows])
    assert np.max(np.abs(g - g.T)) < 1e-14


def test_gram_small_identity(tmp_path):
    out = tmp_path / "gram.csv"
    assert main(["gram", "--n-max", "2", "--lambda", "1", "--out", str(out)]) == 0
    header, rows, _ = read_csv(out)
    assert header[1:] == ["2|1|-1|+1", "2|1|0|+1", "2|1|1|+1"]
    g = np.array([[float(v) for v in r[1:]] for r in rows])
    assert np.allclose(g, np.eye(3), atol=1e-14)


def test_nodes_command(tmp_path):
    out = tmp_path / "nodes.csv"
    assert main(["nodes", "--order", "32", "--k0", "2", "--out", str(out)]) == 0
    _, rows, _ = read_csv(out)
    k = np.array([float(r[1]) for r in rows])
    assert np.array_equal(k, gauss_laguerre_rule(32, 2.0).nodes)


def test_project_single_unit_entry_and_energy(tmp_path):
    rule = gauss_laguerre_rule(200)
    spec = tmp_path / "spectrum.csv"
    write_spectrum(spec, {(1, 0, 1): (rule.nodes, c_multipolar(3, 1, rule.nodes))})
    out = tmp_path / "coeffs.csv"
    assert main(["project", "--input", str(spec), "--n-max", "8", "--out", str(out)]) == 0
    header, rows, summary = read_csv(out)
    big = [r for r in rows if float(r[6]) > 1e-10]
    assert len(big) == 1 and big[0][:4] == ["3", "1", "0", "1"]
    assert float(big[0][4]) == pytest.approx(1.0, abs=1e-10)
    assert summary["energy [hbar c0 k0]"] == pytest.approx(3.0, rel=1e-10)
    assert summary["photon_number"] == pytest.approx(1.0, rel=1e-10)
    assert summary["residual"] < 1e-9


def test_project_with_alpha(tmp_path):
    # dilating then projecting at k0 = 1 equals projecting the original at k0 = alpha
    alpha = 2.0
    source = gauss_laguerre_rule(200, alpha)
    spec = tmp_path / "spectrum.csv"
    write_spectrum(spec, {(2, 1, -1): (source.nodes, source.nodes**2 * np.exp(-source.nodes / alpha))})
    out = tmp_path / "coeffs.csv"
    assert main(["project", "--input", str(spec), "--alpha", "2", "--n-max", "10", "--out", str(out)]) == 0
    direct = tmp_path / "direct.csv"
    assert main(["project", "--input", str(spec), "--k0", "2", "--n-max", "10", "--out", str(direct)]) == 0
    _, rows_a, _ = read_csv(out)
    _, rows_b, _ = read_csv(direct)
    for ra, rb in zip(rows_a, rows_b):
        assert float(ra[4]) == pytest.approx(float(rb[4]), abs=1e-10)


def test_project_missing_column(tmp_path, capsys):
    spec = tmp_path / "bad.csv"
    spec.write_text("j,m,lambda,k,re\n1,0,1,0.5,1.0\n")
    assert main(["project", "--input", str(spec), "--out", str(tmp_path / "o.csv")]) == 2
    assert "missing column 'im'" in capsys.readouterr().err


def test_project_parse_error_line_number(tmp_path, capsys):
    spec = tmp_path / "bad.csv"
    spec.write_text("j,m,lambda,k,re,im\n1,0,1,0.5,1.0,0\n1,0,1,zero,1.0,0\n")
    assert main(["project", "--input", str(spec), "--out", str(tmp_path / "o.csv")]) == 2
    assert "line 3" in capsys.readouterr().err


def test_project_off_grid_input(tmp_path, capsys):
    spec = tmp_path / "off.csv"
    write_spectrum(spec, {(1, 0, 1): (np.linspace(0.1, 5, 200), np.ones(200))})
    assert main(["project", "--input", str(spec), "--out", str(tmp_path / "o.csv")]) == 2
    assert "nodes" in capsys.readouterr().err


def test_timetrace_all(tmp_path):
    out = tmp_path / "trace.csv"
    args = ["timetrace", "--n", "2", "--j", "1", "--l", "1", "--r", "5", "--ct-min", "-15", "--ct-max", "15",
            "--ct-step", "0.05", "--kind", "all", "--out", str(out)]
    assert main(args) == 0
    header, rows, _ = read_csv(out)
    assert header[0] == "ct [m]" and header[-1] == "in+out-regular_abs"
    assert len(rows) == 601
    data = np.array([[float(v) for v in r] for r in rows])
    assert data[:, -1].max() < 1e-8
    ct, mag = data[:, 0], data[:, header.index("regular_abs")]
    inner = np.nonzero((mag[1:-1] > mag[:-2]) & (mag[1:-1] >= mag[2:]))[0] + 1
    top = np.sort(ct[inner[np.argsort(mag[inner])[::-1][:2]]])
    assert abs(top[0] + 5) < 1.5 and abs(top[1] - 5) < 1.5


def test_timetrace_empty_window(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["timetrace", "--ct-min", "1", "--ct-max", "0", "--kind", "regular", "--out", str(out)]) == 0
    assert out.read_text() == "ct [m],regular_re,regular_im,regular_abs\n"


@pytest.mark.parametrize(
    "args,field",
    [
        (["gram", "--n-max", "1"], "n-max"),
        (["basis-table", "--n", "2", "--j", "2"], "n/j"),
        (["timetrace", "--r", "0", "--kind", "incoming"], "r"),
        (["timetrace", "--kind", "sideways"], "kind"),
        (["timetrace", "--k0", "2"], "k0"),
        (["nodes", "--order", "1"], "order"),
        (["project", "--input", "nope.csv", "--alpha", "-1"], "alpha"),
    ],
)
def test_invalid_configs_exit_nonzero(tmp_path, capsys, args, field):
    out = tmp_path / "x.csv"
    assert main(args + ["--out", str(out)]) == 2
    err = capsys.readouterr().err
    assert field in err
    assert not out.exists()


def test_unwritable_output(tmp_path, capsys):
    assert main(["nodes", "--order", "4", "--out", str(tmp_path / "missing" / "x.csv")]) == 2
    assert "cannot write" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = tmp_path / "n.csv"
    proc = subprocess.run([sys.executable, "-m", "photonbasis", "nodes", "--order", "4", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "" and out.exists()


def test_commands_are_deterministic(tmp_path):
    rule = gauss_laguerre_rule(200)
    spec = tmp_path / "spectrum.csv"
    write_spectrum(spec, {(1, 0, 1): (rule.nodes, rule.nodes**2 * np.exp(-rule.nodes))})
    runs = [
        ["basis-table", "--n", "3..5", "--j", "1,2"],
        ["gram", "--n-max", "4"],
        ["nodes"],
        ["project", "--input", str(spec), "--n-max", "12"],
        ["timetrace", "--ct-min", "-3", "--ct-max", "3", "--ct-step", "0.1"],
    ]
    for args in runs:
        for fmt in ("csv", "json"):
            a, b = tmp_path / "a", tmp_path / "b"
            assert main(args + ["--format", fmt, "--out", str(a)]) == 0
            assert main(args + ["--format", fmt, "--out", str(b)]) == 0
            assert a.read_bytes() == b.read_bytes(), args
