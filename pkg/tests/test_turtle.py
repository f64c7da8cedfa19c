import random

import pytest
from hypothesis import given, settings, strategies as st

from eokit.errors import ParseError, UnknownPrefix
from eokit.graph import RDF_TYPE, RDFS_LABEL, BlankNode, Graph, Iri, Literal, PrefixMap, Triple, isomorphic
from eokit.schema import eo, ep, prov, sio
from eokit.syntax import TurtleDocument, parse_turtle, serialize_turtle

from helpers import EX, fixture, random_graph

CL = "http://example.org/clinical#"


def c(local):
    return Iri(CL + local)


def clinical():
    return parse_turtle(fixture("clinical.ttl"))


def _expected_clinical():
    """Expected triples of the clinical fixture, written out one per entry."""
    lab = Literal
    q, inst = c("ContrastiveQuestion"), c("ContrastiveExpInstance")
    ra, rb = c("SystemRecExampleA"), c("SystemRecExampleB")
    task, ckp, ge = c("AITaskExample"), c("ContextualKnowledgePatient"), c("GuidelineEvidence")
    mode, patient = "MODE", "PATIENT"
    return [
        (q, RDF_TYPE, sio("question")),
        (q, RDFS_LABEL, lab("Why Drug B over Drug A?")),
        (inst, RDF_TYPE, eo("ContrastiveExplanation")),
        (inst, ep("isBasedOn"), ra),
        (inst, ep("isBasedOn"), rb),
        (inst, RDFS_LABEL, lab("Guidelines recommend Drug B for this patient")),
        (inst, eo("addresses"), q),
        (ra, RDF_TYPE, eo("SystemRecommendation")),
        (ra, prov("used"), ckp),
        (ra, RDFS_LABEL, lab("Drug A is not sufficient for the patient")),
        (rb, RDF_TYPE, eo("SystemRecommendation")),
        (rb, prov("used"), ge),
        (rb, RDFS_LABEL, lab("Drug B is recommended by the guidelines")),
        (task, RDF_TYPE, eo("DeductiveTask")),
        (task, sio("hasOutput"), ra),
        (task, sio("hasOutput"), rb),
        (task, ep("hasSetting"), mode),
        (mode, RDF_TYPE, eo("ReasoningMode")),
        (mode, RDFS_LABEL, lab("Treatment Planning")),
        (task, prov("used"), ckp),
        (task, prov("used"), ge),
        (task, RDFS_LABEL, lab("Deductive task")),
        (ckp, RDF_TYPE, eo("ContextualKnowledge")),
        (ckp, RDF_TYPE, eo("Foil")),
        (ckp, sio("inRelationTo"), patient),
        (patient, RDF_TYPE, sio("patient")),
        (ckp, sio("isInputIn"), task),
        (ckp, RDFS_LABEL, lab("patient has hyperglycemia")),
        (ge, RDF_TYPE, eo("ScientificKnowledge")),
        (ge, RDF_TYPE, eo("Fact")),
        (ge, sio("isInputIn"), task),
        (ge, RDFS_LABEL, lab("Drug B is the preferred drug")),
    ]


def test_clinical_triples_match_expected():
    expected = _expected_clinical()
    assert len(expected) == 32
    g = clinical().graph
    blanks = {"MODE": BlankNode("mode"), "PATIENT": BlankNode("patient")}
    want = Graph.of(Triple(*(blanks.get(x, x) if isinstance(x, str) else x for x in t)) for t in expected)
    assert len(g) == 32
    assert isomorphic(g, want)


def test_clinical_blank_nodes_are_distinct():
    g = clinical().graph
    blanks = {t.subject for t in g if isinstance(t.subject, BlankNode)}
    assert len(blanks) == 2


def test_clinical_round_trip():
    doc = clinical()
    again = parse_turtle(serialize_turtle(doc))
    assert isomorphic(doc.graph, again.graph)


def test_serialization_is_deterministic():
    doc = clinical()
    assert serialize_turtle(doc) == serialize_turtle(clinical())


def test_latex_and_plain_literals_agree():
    a = parse_turtle("@prefix : <http://e.org/#> . :x rdfs:label ``hi there'' .").graph
    b = parse_turtle('@prefix : <http://e.org/#> . :x rdfs:label "hi there" .').graph
    assert a.triples == b.triples


def test_language_tag_and_escapes():
    g = parse_turtle('@prefix : <http://e.org/#> . :x rdfs:label "a \\"q\\"\\nb"@en-GB .').graph
    (t,) = g.triples
    assert t.object == Literal('a "q"\nb', "en-GB")


def test_sparql_style_prefix_and_labelled_blank():
    text = "PREFIX : <http://e.org/#>\n:x :p _:b1 . _:b1 a eo:Fact . :y :p _:b1 ."
    g = parse_turtle(text).graph
    (b,) = {t.object for t in g if t.predicate == Iri("http://e.org/#p")}
    assert isinstance(b, BlankNode)
    assert len(g.match(s=b)) == 1


def test_quoted_labels_resolve_through_ontology():
    g = parse_turtle("@prefix : <http://e.org/#> . :x a eo:`System Recommendation' ; sio:`has output' :y .").graph
    assert Triple(Iri("http://e.org/#x"), RDF_TYPE, eo("SystemRecommendation")) in g
    assert Triple(Iri("http://e.org/#x"), sio("hasOutput"), Iri("http://e.org/#y")) in g


def test_unknown_prefix():
    with pytest.raises(UnknownPrefix) as err:
        parse_turtle("foo:x a eo:Fact .")
    assert err.value.label == "foo"


@pytest.mark.parametrize(
    "text,line",
    [
        ("@prefix : <http://e.org/#> .\n:x a .", 2),
        ("@prefix : <http://e.org/#> .\n:x a eo:Fact", 2),
        ("@prefix : <http://e.org/#> .\n\n:x rdfs:label \"open .", 3),
        ("@prefix : <http://e.org/#>\n:x a eo:Fact .", 2),
    ],
)
def test_parse_errors_carry_position(text, line):
    with pytest.raises(ParseError) as err:
        parse_turtle(text)
    assert err.value.line == line
    assert err.value.column >= 1


def test_document_prefixes_are_kept():
    doc = clinical()
    assert doc.prefixes.namespace("") == CL
    assert doc.prefixes.namespace("eo") == eo("").value


def test_unsafe_locals_written_as_full_iris():
    g = Graph.of([(Iri(EX + "a%20b"), RDF_TYPE, Iri(EX + "1x")), (Iri(EX + "a%20b"), RDFS_LABEL, Literal("tab\there"))])
    doc = TurtleDocument(PrefixMap({"": EX}), g)
    again = parse_turtle(serialize_turtle(doc))
    assert isomorphic(g, again.graph)


_odd_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=12)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.lists(_odd_text, max_size=4), st.booleans())
def test_random_graph_round_trip(rng, texts, chain):
    g = random_graph(rng, 12, 40)
    extra = [Triple(Iri(EX + "lit"), RDFS_LABEL, Literal(t, rng.choice([None, "en", "de-AT"]))) for t in texts]
    if chain:
        a, b = BlankNode(), BlankNode()
        extra += [Triple(a, Iri(EX + "p"), b), Triple(b, Iri(EX + "p"), a), Triple(Iri(EX + "root"), Iri(EX + "p"), a)]
    g = g.union(Graph.of(extra))
    doc = TurtleDocument(PrefixMap({"": EX, "eo": eo("").value, "ep": ep("").value}), g)
    again = parse_turtle(serialize_turtle(doc))
    assert isomorphic(g, again.graph)


def test_hundred_seeded_round_trips():
    rng = random.Random(7)
    for _ in range(100):
        g = random_graph(rng)
        doc = TurtleDocument(PrefixMap({"": EX}), g)
        assert isomorphic(g, parse_turtle(serialize_turtle(doc)).graph)
