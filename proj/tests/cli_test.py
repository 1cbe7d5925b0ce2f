"""End-to-end checks of the mpst binary: exit codes, determinism, JSON schema."""

import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

CLI = sys.argv.pop(1)
ROOT = Path(sys.argv.pop(1))
CORPUS = ROOT / "tests" / "corpus"
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())


def run(*args, env=None):
    e = dict(os.environ, MPS_COLOR="never")
    if env:
        e.update(env)
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=e, timeout=60)


class ExitCodes(unittest.TestCase):
    def test_check_accepts_oauth(self):
        r = run("check", CORPUS / "oauth.mps")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("accepted", r.stdout)

    def test_check_rejects_two_attempts_naming_rule(self):
        r = run("check", CORPUS / "oauth_two_attempts.mps")
        self.assertEqual(r.returncode, 1)
        self.assertIn("T-Ses", r.stderr)

    def test_compliance_prints_lock_witness(self):
        r = run("compliance", CORPUS / "oauth_two_attempts.env")
        self.assertEqual(r.returncode, 1)
        self.assertIn("witness", r.stdout)
        self.assertIn("a : end", r.stdout)

    def test_lock_env_witness_shows_waiting_peers(self):
        r = run("compliance", CORPUS / "lock.env")
        self.assertEqual(r.returncode, 1)
        self.assertIn("deadlock", r.stdout)
        self.assertIn("s : a?auth(bool)", r.stdout)

    def test_parse_rejects_non_contractive(self):
        r = run("parse", CORPUS / "not_contractive.mps")
        self.assertEqual(r.returncode, 1)
        self.assertIn("contractive", r.stderr)

    def test_parse_error_is_usage_error(self):
        with tempfile.NamedTemporaryFile("w", suffix=".mps", delete=False) as f:
            f.write("participant p type q!( proc 0")
        try:
            r = run("parse", f.name)
            self.assertEqual(r.returncode, 2)
            self.assertRegex(r.stderr, r":1:\d+:")
        finally:
            os.unlink(f.name)

    def test_usage_errors(self):
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("bogus").returncode, 2)
        self.assertEqual(run("check").returncode, 2)
        self.assertEqual(run("--oracle", "nope", "check", CORPUS / "oauth.mps").returncode, 2)
        self.assertEqual(run("check", CORPUS / "missing.mps").returncode, 2)
        self.assertEqual(run("--help").returncode, 0)

    def test_cap_exit_code(self):
        r = run("--universe-cap", "2", "compliance", CORPUS / "oauth.env")
        self.assertEqual(r.returncode, 3)
        r = run("debug", "reach", "--cap", "2", CORPUS / "oauth.env")
        self.assertEqual(r.returncode, 3)

    def test_split_environment_reports_two_blocks(self):
        r = run("compliance", CORPUS / "split.env")
        self.assertEqual(r.returncode, 0)
        self.assertIn("block 1", r.stdout)

    def test_options_and_oracles(self):
        for oracle in ("lex", "revlex"):
            for order in ("lex", "syntactic"):
                r = run("--oracle", oracle, "--label-order", order, "check", CORPUS / "oauth.mps")
                self.assertEqual(r.returncode, 0, (oracle, order, r.stderr))


class Output(unittest.TestCase):
    def test_closure_dot(self):
        with tempfile.TemporaryDirectory() as d:
            out = Path(d) / "g.dot"
            r = run("closure", CORPUS / "oauth.env", "--dot", out)
            self.assertEqual(r.returncode, 0)
            text = out.read_text()
            self.assertTrue(text.startswith("digraph"))
            self.assertIn("->", text)

    def test_simulate_trace_format(self):
        r = run("simulate", CORPUS / "oauth.mps", "--seed", "3", "--max-steps", "20", "--trace")
        self.assertEqual(r.returncode, 0)
        lines = [l for l in r.stdout.splitlines() if " ; " in l]
        self.assertTrue(lines)

    def test_color(self):
        r = run("check", CORPUS / "oauth.mps", env={"MPS_COLOR": "always"})
        self.assertIn("\x1b[32m", r.stdout)
        r = run("check", CORPUS / "oauth.mps", env={"MPS_COLOR": "never"})
        self.assertNotIn("\x1b[", r.stdout)

    def test_deterministic(self):
        cases = [
            ("check", CORPUS / "oauth_two_attempts.mps"),
            ("closure", CORPUS / "oauth.env"),
            ("compliance", CORPUS / "oauth_two_attempts.env"),
            ("simulate", CORPUS / "ping_pong.mps", "--seed", "9", "--trace"),
            ("parse", CORPUS / "variant_server.mps"),
        ]
        for args in cases:
            a, b = run(*args), run(*args)
            self.assertEqual((a.returncode, a.stdout, a.stderr), (b.returncode, b.stdout, b.stderr), args)

    def test_json_validates(self):
        invocations = []
        for f in sorted(CORPUS.iterdir()):
            if f.suffix == ".mps":
                invocations += [("check", f), ("simulate", f, "--seed", "1"), ("parse", f)]
            elif f.suffix == ".env":
                invocations += [("compliance", f), ("closure", f), ("parse", f), ("debug", "reach", f)]
        invocations.append(("--paper-exceptions", "closure", CORPUS / "oauth.env"))
        validated = 0
        for args in invocations:
            r = run("--json", *args)
            if r.returncode in (0, 1) and r.stdout.strip():
                jsonschema.validate(json.loads(r.stdout), SCHEMA)
                validated += 1
        self.assertGreater(validated, 20)


if __name__ == "__main__":
    unittest.main(verbosity=2)
