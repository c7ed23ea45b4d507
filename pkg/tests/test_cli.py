import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given

from test_finset import elements
from tmulticat import documents as docs
from tmulticat.cli import run
from tmulticat.errors import MalformedError
from tmulticat.finset import FiniteSet
from tmulticat.monads import Exceptions, FreeMonoid, TreeMonad, Writer
from tmulticat.multicat import terminal_multicat

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())
MALFORMED = json.loads((GOLDEN / "malformed_cases.json").read_text())


def cli(argv, cwd=GOLDEN):
    return subprocess.run([sys.executable, "-m", "tmulticat", *argv], cwd=cwd,
                          capture_output=True, timeout=120)


@given(elements)
def test_element_documents_round_trip(x):
    assert docs.decode(json.loads(json.dumps(docs.encode(x)))) == x


@pytest.mark.parametrize("m", [terminal_multicat(FreeMonoid(), 2), terminal_multicat(TreeMonad(), 2),
                               terminal_multicat(Writer([[0, 1], [1, 0]]), 1)],
                         ids=["free_monoid", "tree", "writer"])
def test_multicategory_documents_round_trip(m):
    text = docs.dumps(docs.encode_multicat(m))
    assert docs.decode_multicat(docs.load_document(text)) == m


def test_monad_documents_round_trip():
    for p in (Exceptions([0, "e"]), Writer([[0, 1], [1, 0]]), FreeMonoid()):
        assert docs.decode_monad(json.loads(json.dumps(docs.encode_monad(p)))) == p


def test_bad_terms_are_rejected():
    for bad in (True, None, 1.5, [], ["seq", None], ["tag", 3, "x"], ["pair", 1]):
        with pytest.raises(MalformedError):
            docs.decode(bad)
    with pytest.raises(MalformedError):
        docs.decode_set([1, 1])


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden_reports_are_byte_identical(case):
    first, second = cli(case["argv"]), cli(case["argv"])
    expected = (GOLDEN / "expected" / f"{case['name']}.out").read_bytes()
    status = int((GOLDEN / "expected" / f"{case['name']}.exit").read_text())
    assert first.stdout == second.stdout == expected
    assert first.returncode == second.returncode == status


@pytest.mark.parametrize("case", MALFORMED, ids=[c["file"] for c in MALFORMED])
def test_malformed_inputs_exit_with_status_2(case):
    r = cli([*case["argv"], "--input", f"malformed/{case['file']}"])
    assert r.returncode == 2
    report = json.loads(r.stdout)
    assert report["error"]["kind"] == "input" and report["ok"] is False


def test_usage_errors_exit_with_status_2():
    assert cli(["no-such-command"]).returncode == 2
    assert cli(["opetopes", "--dim", "2"]).returncode == 2
    assert cli(["check-multicat", "--input", "inputs/missing.json"]).returncode == 2


def _report(argv, stdin_text=None):
    out = io.StringIO()
    if stdin_text is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin_text)
    try:
        code = run(argv, out)
    finally:
        if stdin_text is not None:
            sys.stdin = old
    return code, out.getvalue()


def test_documented_examples():
    code, text = _report(["check-monad", "--name", "free_commutative_monoid", "--bound", "3"])
    report = json.loads(text)
    assert code == 1 and report["witness"]["detail"]["map"] == "2->1"
    code, text = _report(["opetopes", "--dim", "2", "--size", "4"])
    assert code == 0 and json.loads(text)["counts"]["opetopes"] == 5
    code, text = _report(["structured", "--input", str(GOLDEN / "inputs" / "terminal.json"), "--hom", "3", "2"])
    assert code == 0 and json.loads(text)["counts"]["hom"] == 4


def test_reads_documents_from_stdin():
    doc = docs.dumps({"monad": {"name": "free_monoid"}, "multicategory": {"terminal": 2}})
    code, text = _report(["check-multicat", "--input", "-"], doc)
    assert code == 0 and json.loads(text)["ok"]


def test_guards_exit_with_status_3():
    code, text = _report(["endo", "--carrier", "3", "--arity", "3"])
    assert code == 3 and json.loads(text)["error"]["kind"] == "guard"
    code, _ = _report(["opetopes", "--dim", "3", "--size", "6", "--cap", "20"])
    assert code == 3


def test_decoded_sets_keep_their_order():
    assert docs.encode_set(docs.decode_set(["b", 2, "a", 1])) == [1, 2, "a", "b"]
    assert isinstance(docs.decode_set([]), FiniteSet)
