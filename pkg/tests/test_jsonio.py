import pytest

from shufflekit.counters import cm_accepts
from shufflekit.errors import InputError
from shufflekit.fa import Nfa, accepts, determinize
from shufflekit.fixtures import anbn_dcm, anbn_dpda, staircase_l1_dpda
from shufflekit.jsonio import (
    doc_to_machine,
    dumps,
    load,
    machine_to_doc,
    save,
    semilinear_to_doc,
    word_to_doc,
)
from shufflekit.pushdown import npda_accepts_search
from shufflekit.semilinear import LinearSet, SemilinearSet, sl_membership
from shufflekit.shuffle import naive_shuffle_nfa

from helpers import all_words


def roundtrip(obj):
    return doc_to_machine(machine_to_doc(obj))


def test_nfa_roundtrip_preserves_language():
    m = naive_shuffle_nfa("ab", "ba")
    m2 = roundtrip(m)
    for w in all_words(("a", "b"), 4):
        assert accepts(m, w) == accepts(m2, w)


def test_dfa_roundtrip_keeps_kind():
    d = determinize(naive_shuffle_nfa("ab", "cd"))
    doc = machine_to_doc(d)
    assert doc["kind"] == "dfa"
    d2 = doc_to_machine(doc)
    assert d2.deterministic


def test_canonical_save_is_stable(tmp_path):
    machines = [
        naive_shuffle_nfa("ab", "ba"),
        anbn_dpda(),
        anbn_dcm(),
        staircase_l1_dpda(),
    ]
    for i, m in enumerate(machines):
        p = tmp_path / f"m{i}.json"
        save(str(p), m)
        text1 = p.read_text()
        save(str(p), load(str(p)))
        assert p.read_text() == text1


def test_pda_roundtrip():
    m = anbn_dpda()
    m2 = roundtrip(m)
    assert m2.deterministic
    for w in all_words(("a", "b"), 6):
        assert npda_accepts_search(m, w) == npda_accepts_search(m2, w)


def test_cm_roundtrip():
    m = anbn_dcm()
    m2 = roundtrip(m)
    assert m2.deterministic and m2.k == 1 and m2.r == 1
    for w in all_words(("a", "b"), 6):
        assert cm_accepts(m, w) == cm_accepts(m2, w)


def test_semilinear_roundtrip():
    q = SemilinearSet(2, (LinearSet((1, 0), ((1, 1),)), LinearSet((0, 2))))
    doc = semilinear_to_doc(q, ["a", "b"])
    q2 = doc_to_machine(doc)
    for x in [(1, 0), (3, 2), (0, 2), (2, 2), (5, 4)]:
        assert sl_membership(q, x) == sl_membership(q2, x)


def test_word_doc():
    doc = word_to_doc(("sym1", "sym2"))
    assert doc_to_machine(doc) == ("sym1", "sym2")


def test_eps_not_declarable_in_alphabet():
    with pytest.raises(InputError):
        doc_to_machine(
            {
                "kind": "nfa",
                "alphabet": ["a", "<eps>"],
                "states": ["s"],
                "start": "s",
                "finals": [],
                "transitions": [],
            }
        )


def test_unknown_kind_rejected():
    with pytest.raises(InputError):
        doc_to_machine({"kind": "pda"})


def test_missing_field_reported():
    with pytest.raises(InputError):
        doc_to_machine({"kind": "nfa", "alphabet": ["a"]})
