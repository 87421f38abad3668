"""JSON documents for machines and semilinear sets.

Every document carries a "kind" discriminator: nfa, dfa, npda, dpda, ncm, dcm,
semilinear, or word.  The epsilon move token is the reserved string "<eps>"
and the counter-machine end-marker is "<end>"; neither may be declared in an
alphabet.  Stack push strings are arrays with the new top first and the bottom
last.  Saving is canonical (sorted transitions, fixed key order, two-space
indent), so load/save round-trips are byte-identical on canonical files.
"""

from __future__ import annotations

import json
from typing import Any

from .counters import Dcm, Ncm
from .errors import InputError
from .fa import Dfa, Nfa
from .pushdown import Dpda, Npda
from .semilinear import LinearSet, SemilinearSet
from .words import EPSILON, Word, as_word

KINDS = ("nfa", "dfa", "npda", "dpda", "ncm", "dcm", "semilinear", "word")


def machine_to_doc(obj: Any) -> dict:
    if isinstance(obj, Dfa):
        return _fa_doc(obj, "dfa")
    if isinstance(obj, Nfa):
        return _fa_doc(obj, "nfa")
    if isinstance(obj, Dpda):
        return _pda_doc(obj, "dpda")
    if isinstance(obj, Npda):
        return _pda_doc(obj, "npda")
    if isinstance(obj, Dcm):
        return _cm_doc(obj, "dcm")
    if isinstance(obj, Ncm):
        return _cm_doc(obj, "ncm")
    if isinstance(obj, SemilinearSet):
        raise InputError("semilinear documents need an alphabet: use semilinear_to_doc")
    raise InputError(f"cannot serialise {type(obj).__name__}")


def _fa_doc(m: Nfa, kind: str) -> dict:
    transitions = [
        {"from": src, "on": sym, "to": sorted(dsts)}
        for (src, sym), dsts in m.transitions.items()
    ]
    transitions.sort(key=lambda t: (t["from"], t["on"], t["to"]))
    return {
        "kind": kind,
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "start": m.start,
        "finals": sorted(m.finals),
        "transitions": transitions,
    }


def _pda_doc(m: Npda, kind: str) -> dict:
    transitions = []
    for (src, sym, top), moves in m.transitions.items():
        for dst, push in sorted(moves):
            transitions.append(
                {"from": src, "on": sym, "top": top, "to": dst, "push": list(push)}
            )
    transitions.sort(key=lambda t: (t["from"], t["on"], t["top"], t["to"], t["push"]))
    return {
        "kind": kind,
        "alphabet": list(m.alphabet),
        "stack_alphabet": list(m.stack_alphabet),
        "states": list(m.states),
        "start": m.start,
        "initial_stack": m.initial_stack,
        "finals": sorted(m.finals),
        "transitions": transitions,
    }


def _cm_doc(m: Ncm, kind: str) -> dict:
    transitions = []
    for (src, sym, guard), moves in m.transitions.items():
        for dst, mv, upd in sorted(moves):
            transitions.append(
                {
                    "from": src,
                    "on": sym,
                    "guard": list(guard),
                    "to": dst,
                    "move": mv,
                    "update": list(upd),
                }
            )
    transitions.sort(
        key=lambda t: (t["from"], t["on"], t["guard"], t["to"], t["move"], t["update"])
    )
    return {
        "kind": kind,
        "k": m.k,
        "r": m.r,
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "start": m.start,
        "finals": sorted(m.finals),
        "transitions": transitions,
    }


def semilinear_to_doc(q: SemilinearSet, alphabet: list[str]) -> dict:
    if len(alphabet) != q.dim:
        raise InputError("alphabet length must match the set dimension")
    return {
        "kind": "semilinear",
        "alphabet": list(alphabet),
        "components": [
            {"constant": list(c.constant), "periods": [list(p) for p in c.periods]}
            for c in q.components
        ],
    }


def word_to_doc(w: Word) -> dict:
    return {"kind": "word", "symbols": list(w)}


def doc_to_machine(doc: dict) -> Any:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"unknown document kind {kind!r}")
    try:
        if kind in ("nfa", "dfa"):
            return _doc_fa(doc, Dfa if kind == "dfa" else Nfa)
        if kind in ("npda", "dpda"):
            return _doc_pda(doc, Dpda if kind == "dpda" else Npda)
        if kind in ("ncm", "dcm"):
            return _doc_cm(doc, Dcm if kind == "dcm" else Ncm)
        if kind == "semilinear":
            return doc_to_semilinear(doc)
        return as_word(doc["symbols"])
    except KeyError as exc:
        raise InputError(f"document is missing field {exc}") from exc


def _doc_fa(doc: dict, cls: type) -> Nfa:
    transitions: dict[tuple[str, str], set[str]] = {}
    for t in doc["transitions"]:
        key = (t["from"], t["on"])
        transitions.setdefault(key, set()).update(t["to"])
    return cls(doc["alphabet"], doc["states"], doc["start"], doc["finals"], transitions)


def _doc_pda(doc: dict, cls: type) -> Npda:
    transitions: dict[tuple[str, str, str], set] = {}
    for t in doc["transitions"]:
        key = (t["from"], t["on"], t["top"])
        transitions.setdefault(key, set()).add((t["to"], tuple(t["push"])))
    return cls(
        doc["states"],
        doc["alphabet"],
        doc["stack_alphabet"],
        doc["start"],
        doc["initial_stack"],
        doc["finals"],
        transitions,
    )


def _doc_cm(doc: dict, cls: type) -> Ncm:
    transitions: dict[tuple[str, str, tuple], set] = {}
    for t in doc["transitions"]:
        key = (t["from"], t["on"], tuple(t["guard"]))
        transitions.setdefault(key, set()).add((t["to"], t["move"], tuple(t["update"])))
    return cls(
        doc["k"],
        doc["r"],
        doc["alphabet"],
        doc["states"],
        doc["start"],
        doc["finals"],
        transitions,
    )


def doc_to_semilinear(doc: dict) -> SemilinearSet:
    alphabet = doc["alphabet"]
    comps = tuple(
        LinearSet(tuple(c["constant"]), tuple(tuple(p) for p in c["periods"]))
        for c in doc["components"]
    )
    return SemilinearSet(len(alphabet), comps)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def save(path: str, obj: Any, alphabet: list[str] | None = None) -> None:
    if isinstance(obj, SemilinearSet):
        if alphabet is None:
            raise InputError("semilinear save needs an alphabet")
        doc = semilinear_to_doc(obj, alphabet)
    elif isinstance(obj, tuple):
        doc = word_to_doc(obj)
    elif isinstance(obj, dict):
        doc = obj
    else:
        doc = machine_to_doc(obj)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def load(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc
    return doc_to_machine(doc)


def load_doc(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc
