"""
Tests for the command-line surface: exit codes, text and structured output
"""

import io
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import orjson

from src.cli import EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, run
from src.godel import godel_number
from src.lang import parse_formula

GOLDEN = Path(__file__).parent / "golden"


def invoke(*argv):
    """(exit code, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(list(argv))
    return code, out.getvalue(), err.getvalue()


def invoke_structured(*argv):
    code, out, _ = invoke("--format", "structured", *argv)
    return code, orjson.loads(out)


class TestEvaluation(unittest.TestCase):
    def test_eval(self):
        code, out, _ = invoke("eval", "double(add(C1, double(double(C1))))")
        self.assertEqual((code, out.strip()), (EXIT_OK, "10"))

    def test_eval_parse_error(self):
        code, out, err = invoke("eval", "add(C1)")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(out, "")
        self.assertIn("✗", err)

    def test_decide(self):
        self.assertEqual(invoke("decide", "A x <= C2. x <= double(x)")[:2], (EXIT_OK, "true\n"))
        self.assertEqual(invoke("decide", "C1 <= C0")[:2], (EXIT_NEGATIVE, "false\n"))

    def test_decide_rejects_unbounded(self):
        self.assertEqual(invoke("decide", "A x. x = x")[0], EXIT_USAGE)

    def test_decide_rejects_open(self):
        self.assertEqual(invoke("decide", "x = C0")[0], EXIT_USAGE)

    def test_encode(self):
        code, data = invoke_structured("encode", "6")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(data["success"])
        self.assertEqual(data["data"]["term"], "double(add(C1, double(C1)))")
        self.assertEqual(invoke("encode", "-1")[0], EXIT_USAGE)


class TestClassification(unittest.TestCase):
    def test_classify(self):
        code, out, _ = invoke("classify", "A x. A y. E z. sub(z, x) = y")
        self.assertEqual((code, out.strip()), (EXIT_OK, "Pi(2)"))

    def test_classify_not_prenex(self):
        self.assertEqual(invoke("classify", "(A x. x = x) & C0 = C0")[0], EXIT_USAGE)

    def test_classify_normalized(self):
        code, data = invoke_structured("classify", "--normalize", "~(A x. x = x)")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(data["data"]["sentence"], "E x. ~(x = x)")
        self.assertEqual(data["data"]["class"]["shape"], "Sigma")

    def test_prenex(self):
        code, out, _ = invoke("prenex", "(A x. x = C0) -> C0 = C1")
        self.assertEqual((code, out.strip()), (EXIT_OK, "E x. x = C0 -> C0 = C1"))


class TestProofCommands(unittest.TestCase):
    def setUp(self):
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)

    def test_check_golden(self):
        code, out, _ = invoke("check", str(GOLDEN / "tautology.proof"))
        self.assertEqual((code, out.strip()), (EXIT_OK, "Valid"))

    def test_check_truncated(self):
        lines = (GOLDEN / "tautology.proof").read_bytes().splitlines(keepends=True)
        path = self.tmp / "short.proof"
        path.write_bytes(b"".join(lines[:4]))
        code, out, _ = invoke("check", str(path))
        self.assertEqual(code, EXIT_NEGATIVE)
        self.assertTrue(out.startswith("Invalid: open branch"))

    def test_check_missing_file(self):
        self.assertEqual(invoke("check", str(self.tmp / "absent.proof"))[0], EXIT_USAGE)

    def test_prove_writes_checkable_file(self):
        path = self.tmp / "taut.proof"
        code, out, _ = invoke("prove", "C0 = C0 | ~(C0 = C0)", "--out", str(path))
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("Proof found"))
        self.assertEqual(invoke("check", str(path))[0], EXIT_OK)

    def test_prove_not_found(self):
        code, data = invoke_structured("prove", "C0 = C1", "--budget", "200")
        self.assertEqual(code, EXIT_NEGATIVE)
        self.assertFalse(data["success"])
        self.assertFalse(data["data"]["found"])

    def test_prove_from_chain(self):
        code, _, _ = invoke("prove", "double(C1) = double(C1)", "--basis", "chain:2",
                            "--budget", "2000")
        self.assertEqual(code, EXIT_OK)

    def test_cut(self):
        impl = self.tmp / "impl.proof"
        self.assertEqual(
            invoke("prove", "(C0 = C0 | ~(C0 = C0)) -> (C0 = C0 | ~(C0 = C0))",
                   "--out", str(impl))[0],
            EXIT_OK,
        )
        out_path = self.tmp / "cut.proof"
        code, out, _ = invoke("cut", str(GOLDEN / "tautology.proof"), str(impl),
                              "--out", str(out_path))
        self.assertEqual(code, EXIT_OK, out)
        self.assertEqual(invoke("check", str(out_path), "--level", "rank0")[0], EXIT_OK)
        self.assertEqual(invoke("check", str(out_path), "--level", "none")[0], EXIT_NEGATIVE)


class TestGodelCommand(unittest.TestCase):
    def test_number_and_decode(self):
        code, out, _ = invoke("godel", "C0 = C0")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(int(out.strip()), godel_number(parse_formula("C0 = C0")))
        code, out, _ = invoke("godel", "--decode", out.strip())
        self.assertEqual((code, out.strip()), (EXIT_OK, "C0 = C0"))

    def test_decode_hex(self):
        code, out, _ = invoke("godel", "--decode", hex(godel_number(parse_formula("C1 <= C2"))))
        self.assertEqual((code, out.strip()), (EXIT_OK, "C1 <= C2"))

    def test_invalid_code(self):
        self.assertEqual(invoke("godel", "--decode", "0")[0], EXIT_USAGE)
        self.assertEqual(invoke("godel", "--decode", "banana")[0], EXIT_USAGE)


class TestSystemCommand(unittest.TestCase):
    def test_classify_totality(self):
        code, out, _ = invoke("system", "classify", "--basis", "totality", "--budget", "500")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("TypeM"))

    def test_selfref(self):
        code, out, _ = invoke("system", "selfref", "--level", "rank0")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("diagonal identity: holds", out)

    def test_consearch_writes_record(self):
        tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, tmp)
        record = tmp / "run.json"
        code, _, _ = invoke("system", "consearch", "--basis", "chain:1", "--budget", "100",
                            "--out", str(record))
        self.assertEqual(code, EXIT_NEGATIVE)
        code, out, _ = invoke("report", str(record))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("NoRefutationFound", out)

    def test_group2_needs_sentence(self):
        self.assertEqual(invoke("system", "group2", "--basis", "empty")[0], EXIT_USAGE)


class TestUsage(unittest.TestCase):
    def test_unknown_command(self):
        code, _, err = invoke("frobnicate")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("lstar", err)

    def test_bad_level(self):
        self.assertEqual(invoke("check", str(GOLDEN / "tautology.proof"), "--level", "rank9")[0],
                         EXIT_USAGE)

    def test_structured_error_envelope(self):
        code, data = invoke_structured("eval", "frob(C1)")
        self.assertEqual(code, EXIT_USAGE)
        self.assertFalse(data["success"])
        self.assertEqual(data["metadata"]["command"], "eval")
        self.assertIn("code", data["error"])

    def test_fuzz(self):
        code, out, _ = invoke("--seed", "5", "fuzz", "200")
        self.assertEqual((code, out.strip()), (EXIT_OK, "200/200 round trips passed"))


if __name__ == "__main__":
    os.environ.setdefault("ENVIRONMENT", "testing")
    unittest.main()
