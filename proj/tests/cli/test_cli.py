"""Command-line tests: exit codes, output formats and reproducibility."""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

BIN = os.environ.get("AB_SPECTRAL_BIN", "ab_spectral")


def run(*args, check=None):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    if check is not None and proc.returncode != check:
        raise AssertionError(f"{args}: exit {proc.returncode}, stderr:\n{proc.stderr}")
    return proc


def rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def atoms(text):
    return [l.split(",")[1:] for l in text.splitlines() if l.startswith("# atom")]


class Eigenfunction(unittest.TestCase):
    def test_bound_state_profile_decays(self):
        out = run("eigenfunction", "--kappa", "0.5", "--theta", "pi/2", "--energy", "-1",
                  "--r", "0.05:10:512", check=0).stdout
        data = rows(out)
        self.assertEqual(len(data), 512)
        self.assertEqual(out.splitlines()[0], "r,u,du_dr")
        # E = -1 is the bound state of (0.5, pi/2): u ~ C e^{-r} in the tail. Further out
        # the e^{+r} pieces cancel with relative error ~ e^{2r} * 1e-16.
        tail = [(float(d["r"]), float(d["u"])) for d in data if 3.0 < float(d["r"]) < 6.0]
        for (r1, u1), (r2, u2) in zip(tail, tail[1:]):
            self.assertAlmostEqual(math.log(abs(u2 / u1)) / (r2 - r1), -1.0, delta=1e-6)

    def test_theta_optional_off_the_extension_family(self):
        out = run("eigenfunction", "--kappa", "1.5", "--energy", "2", "--r", "0.5:2:4", check=0).stdout
        self.assertEqual(len(rows(out)), 4)

    def test_usage_errors(self):
        self.assertEqual(run("eigenfunction", "--kappa", "0.5", "--theta", "1", "--energy", "1",
                             "--r", "0:1:3").returncode, 2)
        self.assertEqual(run("eigenfunction", "--kappa", "0.5", "--energy", "1", "--r", "1:2:3").returncode, 2)
        self.assertEqual(run("eigenfunction", "--kappa", "abc", "--theta", "1", "--energy", "1",
                             "--r", "1:2:3").returncode, 2)
        self.assertEqual(run("eigenfunction", "--kappa", "0.5").returncode, 2)


class BoundStates(unittest.TestCase):
    def test_half_flux_pi_over_two(self):
        out = run("bound-states", "--phi", "0.5", "--theta", "pi/2", check=0).stdout
        data = rows(out)
        self.assertEqual([d["m"] for d in data], ["-1", "0"])
        for d in data:
            self.assertAlmostEqual(float(d["E_b"]), -1.0, places=12)

    def test_atom_free_branch(self):
        # theta = pi kappa / 2 per channel: m = -1 has kappa = -0.5, m = 0 has 0.5
        with tempfile.NamedTemporaryFile("w", suffix=".ini", delete=False) as f:
            f.write("phi = 0.5\n[channel.-1]\ntheta = -0.25pi\n[channel.0]\ntheta = 0.25pi\n")
        try:
            out = run("bound-states", "--config", f.name, check=0).stdout
        finally:
            os.unlink(f.name)
        self.assertEqual(out, "m,kappa,E_b,weight,theta\n")

    def test_zero_flux(self):
        data = rows(run("bound-states", "--phi", "0", "--theta", "pi/4", check=0).stdout)
        self.assertEqual(len(data), 1)
        self.assertAlmostEqual(float(data[0]["E_b"]) / -math.exp(math.pi), 1.0, places=12)

    def test_bad_channel_set_is_a_config_error(self):
        with tempfile.NamedTemporaryFile("w", suffix=".ini", delete=False) as f:
            f.write("phi = 0.5\n[channel.0]\ntheta = 1\n")
        try:
            proc = run("bound-states", "--config", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(proc.returncode, 2)
        self.assertIn("m = -1", proc.stderr)


class Measure(unittest.TestCase):
    def test_collapse_and_atom_lines(self):
        k = 0.5
        out = run("measure", "--kappa", str(k), "--theta", "0.25pi", "--energy", "0.5:4:8", check=0).stdout
        for d in rows(out):
            self.assertAlmostEqual(float(d["density"]) / (0.5 * float(d["E"]) ** k), 1.0, places=12)
        self.assertEqual(atoms(out), [])
        out = run("measure", "--kappa", "0.3", "--theta", "pi/2", "--energy", "1:2:2", check=0).stdout
        self.assertEqual(len(atoms(out)), 1)
        self.assertAlmostEqual(float(atoms(out)[0][0]), -1.0, places=12)


class Transform(unittest.TestCase):
    def test_named_family_roundtrip(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "c.csv")
            proc = run("transform", "--kappa", "0.3", "--theta", "pi/2", "--input", "gauss:0.5:3",
                       "-o", path, check=0)
            summary = dict(kv.split("=") for kv in proc.stdout.split())
            self.assertLessEqual(float(summary["roundtrip_defect"]), 1e-6)
            self.assertLessEqual(float(summary["parseval_defect"]), 1e-6)
            with open(path) as f:
                text = f.read()
            self.assertEqual(text.splitlines()[0], "E,re,im")
            self.assertEqual(len(atoms(text)), 1)
            self.assertFalse(any(n.startswith(".") or ".tmp." in n for n in os.listdir(d)))

    def test_csv_input(self):
        # Gauss-Legendre samples written by the library itself come back with exact weights.
        with tempfile.TemporaryDirectory() as d:
            coeffs = os.path.join(d, "c.csv")
            src = os.path.join(d, "psi.csv")
            nodes = gauss_legendre(64, 0.5, 3.0)
            c, s = 1.75, 2.5 / 12.5
            with open(src, "w") as f:
                f.write("r,re,im\n")
                for r in nodes:
                    f.write(f"{r!r},{math.exp(-0.5 * ((r - c) / s) ** 2)!r},0\n")
            proc = run("transform", "--kappa", "1.5", "--input", src, "-o", coeffs, check=0)
            summary = dict(kv.split("=") for kv in proc.stdout.split())
            self.assertLessEqual(float(summary["parseval_defect"]), 1e-6)

    def test_malformed_csv_reports_the_line(self):
        with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as f:
            f.write("r,re,im\n1.0,0.5,0\n1.5,oops,0\n")
        try:
            proc = run("transform", "--kappa", "0.3", "--theta", "1", "--input", f.name)
        finally:
            os.unlink(f.name)
        self.assertEqual(proc.returncode, 2)
        self.assertIn(":3:", proc.stderr)

    def test_3d_separable_family(self):
        proc = run("transform", "--mode", "3d", "--phi", "0.3", "--theta", "pi/2", "--input", "gauss:0.5:3",
                   "--m-max", "2", "--p-nodes", "16", check=0)
        data = rows(proc.stdout)
        self.assertEqual({d["m"] for d in data}, {"0"})
        self.assertEqual(len({d["p"] for d in data}), 16)
        self.assertEqual(len(atoms(proc.stdout)), 16)
        summary = dict(kv.split("=") for kv in proc.stderr.split())
        self.assertLessEqual(float(summary["parseval_defect"]), 1e-5)

    def test_outputs_are_reproducible(self):
        args = ("transform", "--kappa", "-0.7", "--theta", "1", "--input", "gauss:0.5:3", "--e-max", "200")
        self.assertEqual(run(*args, check=0).stdout, run(*args, check=0).stdout)


class Verify(unittest.TestCase):
    def test_selected_checks_pass(self):
        proc = run("verify", "--check", "c01_wronskian", "--check", "c05_measure_collapse", check=0)
        report = json.loads(proc.stdout)
        self.assertEqual({r["check_id"] for r in report}, {"c01_wronskian", "c05_measure_collapse"})
        self.assertTrue(all(r["passed"] and r["ok"] for r in report))

    def test_negative_controls_are_expected_failures(self):
        proc = run("verify", "--negative-controls", "--check", "c12_negative_controls", check=0)
        report = json.loads(proc.stdout)
        self.assertEqual(len(report), 2)
        for r in report:
            self.assertTrue(r["expected_failure"])
            self.assertFalse(r["passed"])
            self.assertGreaterEqual(r["measured"], 1e-3)

    def test_failing_check_exits_one(self):
        with tempfile.NamedTemporaryFile("w", suffix=".ini", delete=False) as f:
            f.write("[verify]\ntol_wronskian = 1e-30\n")
        try:
            proc = run("verify", "--config", f.name, "--check", "c01_wronskian")
        finally:
            os.unlink(f.name)
        self.assertEqual(proc.returncode, 1)

    def test_bad_config_exits_two(self):
        with tempfile.NamedTemporaryFile("w", suffix=".ini", delete=False) as f:
            f.write("phi = 0.3\n[channel.5]\ntheta = 1\n")
        try:
            proc = run("verify", "--config", f.name, "--check", "c01_wronskian")
        finally:
            os.unlink(f.name)
        self.assertEqual(proc.returncode, 2)
        self.assertEqual(run("verify", "--check", "nope").returncode, 2)

    def test_config_output_path_unless_overridden(self):
        with tempfile.TemporaryDirectory() as d:
            cfg, dest, other = (os.path.join(d, n) for n in ("run.ini", "r.json", "o.json"))
            with open(cfg, "w") as f:
                f.write(f"[verify]  # only the measure checks\nkappas = 0.3\n[output]\npath = {dest}\n")
            proc = run("verify", "--config", cfg, "--check", "c05_measure_collapse", check=0)
            self.assertIn("checks", proc.stdout)
            with open(dest) as f:
                self.assertTrue(json.load(f))
            run("verify", "--config", cfg, "--check", "c05_measure_collapse", "-o", other, check=0)
            self.assertTrue(os.path.exists(other))

    def test_report_is_deterministic(self):
        with tempfile.TemporaryDirectory() as d:
            a, b = os.path.join(d, "a.json"), os.path.join(d, "b.json")
            run("verify", "--check", "c04_bound_states", "-o", a, check=0)
            run("verify", "--check", "c04_bound_states", "-o", b, check=0)
            with open(a, "rb") as fa, open(b, "rb") as fb:
                self.assertEqual(fa.read(), fb.read())


class Help(unittest.TestCase):
    def test_every_command_documents_itself(self):
        for cmd in ("eigenfunction", "measure", "bound-states", "transform", "verify"):
            proc = run(cmd, "--help", check=0)
            self.assertIn("--output", proc.stdout)


def gauss_legendre(n, a, b):
    # Newton on P_n from the Chebyshev guesses; enough for 64 nodes to 1e-15.
    nodes = []
    for i in range(1, n + 1):
        x = math.cos(math.pi * (i - 0.25) / (n + 0.5))
        for _ in range(100):
            p0, p1 = 1.0, x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < 1e-16:
                break
        nodes.append(x)
    return sorted(0.5 * (a + b) + 0.5 * (b - a) * x for x in nodes)


if __name__ == "__main__":
    if len(sys.argv) > 1 and not sys.argv[1].startswith("-"):
        BIN = sys.argv.pop(1)
    unittest.main()
