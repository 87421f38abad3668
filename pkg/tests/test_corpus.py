"""The shipped fixture corpus: round-trip stability and coherence."""

import glob
import json
import os

from shufflekit import jsonio
from shufflekit.counters import Ncm, cm_accepts
from shufflekit.fa import Nfa, accepts
from shufflekit.pushdown import Npda
from shufflekit.shuffle import enumerate_shuffle

CORPUS = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def corpus_files():
    return sorted(glob.glob(os.path.join(CORPUS, "**", "*.json"), recursive=True))


def test_corpus_exists():
    assert len(corpus_files()) >= 15


def test_corpus_roundtrips_byte_identical(tmp_path):
    for path in corpus_files():
        original = open(path, encoding="utf-8").read()
        doc = json.loads(original)
        if doc.get("kind") == "word" or "kind" not in doc:
            continue  # words and manifests carry no canonical machine form
        machine = jsonio.doc_to_machine(doc)
        if doc["kind"] == "semilinear":
            rendered = jsonio.dumps(jsonio.semilinear_to_doc(machine, doc["alphabet"]))
        else:
            rendered = jsonio.dumps(jsonio.machine_to_doc(machine))
        assert rendered == original, path


def test_reduction_corpus_is_coherent():
    for name, expect_escape in (("sat_taut", True), ("sat_unsat", False)):
        base = os.path.join(CORPUS, "reductions", name)
        u = jsonio.load(os.path.join(base, "u.json"))
        v = jsonio.load(os.path.join(base, "v.json"))
        m = jsonio.load(os.path.join(base, "automaton.json"))
        manifest = json.load(open(os.path.join(base, "manifest.json")))
        assert manifest["u_len"] == len(u) and manifest["v_len"] == len(v)
        escaped = any(not accepts(m, w) for w in enumerate_shuffle(u, v, bound=32))
        assert escaped == expect_escape


def test_counter_corpus_members():
    m = jsonio.load(os.path.join(CORPUS, "counters", "anbn_dcm.json"))
    assert isinstance(m, Ncm)
    assert cm_accepts(m, "aabb") and not cm_accepts(m, "")
