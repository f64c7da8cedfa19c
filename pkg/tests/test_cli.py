import json
import subprocess
import sys

import pytest

from eokit.cli import run
from eokit.syntax import normalized_tokens

from helpers import FIXTURES, fixture


def f(name):
    return str(FIXTURES / name)


def test_sufficiency_scientific_matches_fixture():
    code, out, _ = run(["sufficiency", "scientific"])
    assert code == 0
    assert normalized_tokens(out) == normalized_tokens(fixture("scientific.mos"))


def test_classify_derive_only():
    code, out, _ = run(["classify", f("clinical.ttl"), "--derive-only"])
    assert code == 0
    assert out.strip() == ":ContrastiveExpInstance : ContrastiveExplanation"


def test_classify_structured_lists_witnesses():
    code, out, _ = run(["--format", "structured", "classify", f("clinical.ttl"), "--derive-only"])
    data = json.loads(out)
    (m,) = data["memberships"]
    assert m["derived"] is True
    assert ["eo:Fact", ":GuidelineEvidence"] in m["witnesses"]
    assert ["eo:Foil", ":ContextualKnowledgePatient"] in m["witnesses"]


def test_methods_trace_based():
    code, out, _ = run(["methods", "trace-based"])
    assert out.splitlines() == ["Knowledge-based systems", "Machine learning model: decision trees"]


def test_questions_structured():
    code, out, _ = run(["questions", "counterfactual", "--format", "structured"])
    data = json.loads(out)
    assert set(data["identified"]) == {
        "What other factors about the patient does the system know of?",
        "What if the major problem was a fasting plasma glucose?",
    }
    assert data["prototypical"] == "What if input A was over 1000?"


def test_recommend_contrastive_profile():
    code, out, _ = run(["recommend", "--profile", f("contrastive_profile.yaml"), "--format", "structured"])
    data = json.loads(out)
    top = data["recommendations"][0]
    assert top["token"] == "contrastive" and top["satisfiable"] and top["rank"] == 1


def test_recommend_percentage_question():
    code, out, _ = run(["recommend", "--profile", f("statistical_profile.yaml"), "--question", f("percentage_question.yaml")])
    assert out.splitlines() == [
        "Explanation type: statistical",
        "System: run `Inductive' AI task with `Clustering' method to generate numerical evidence",
    ]


def test_query_restriction_table():
    code, out, _ = run(["query", f("restriction.rq")])
    lines = out.splitlines()
    assert lines[0].split() == ["?class", "?restriction"]
    assert len(lines) == 3


def test_query_with_data():
    rq = FIXTURES / "restriction.rq"
    code, out, _ = run(["--format", "structured", "query", str(rq), f("clinical.ttl")])
    assert code == 0
    assert json.loads(out)["variables"] == ["class", "restriction"]


def test_validate_exit_codes():
    assert run(["validate", f("clinical.ttl")])[0] == 0
    code, out, _ = run(["validate", f("factfoil.ttl"), "--format", "structured"])
    assert code == 1
    data = json.loads(out)
    assert data["errors"] == 1
    assert data["diagnostics"][0]["code"] == "disjointness-violation"


def test_parse_error_exit_two_with_position():
    code, out, err = run(["validate", f("bad_syntax.ttl")])
    assert code == 2
    assert "line 4" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["classify"],
        ["methods", "trace-based", "--bogus"],
        ["--format", "xml", "types"],
        ["methods", "not-a-type"],
        ["validate", "/nonexistent/file.ttl"],
        ["recommend", "--profile", f("percentage_question.yaml")],
    ],
)
def test_usage_and_input_errors_exit_two(argv):
    code, out, err = run(argv)
    assert code == 2
    assert err


def test_structured_output_is_byte_identical():
    args = ["--format", "structured", "recommend", "--profile", f("contrastive_profile.yaml")]
    assert run(args) == run(args)


def test_check_command():
    code, out, _ = run(["check", f("clinical.ttl"), ":ContrastiveExpInstance", "ep:isBasedOn some (eo:SystemRecommendation and prov:used some eo:Fact)"])
    assert code == 0
    assert out.startswith(":ContrastiveExpInstance: satisfied")


def test_seed_overlay_flag(tmp_path):
    overlay = tmp_path / "extra.ttl"
    overlay.write_text(
        "@prefix ex: <http://example.org/x#> .\n"
        "ex:Bayes rdfs:subClassOf eo:AIMethod ; rdfs:label \"Bayesian network\" .\n"
        "[] a eo:GenerationRecipe ; eo:forExplanationType eo:EverydayExplanation ;\n"
        "   eo:usesTask eo:AbductiveTask ; eo:usesMethod ex:Bayes .\n",
        encoding="utf-8",
    )
    assert run(["methods", "everyday"])[1] == ""
    code, out, _ = run(["--seed-overlay", str(overlay), "methods", "everyday"])
    assert out.strip() == "Bayesian network"


def test_console_script_reads_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "eokit.cli", "classify", "-", "--derive-only"],
        input=fixture("clinical.ttl"),
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == ":ContrastiveExpInstance : ContrastiveExplanation"
