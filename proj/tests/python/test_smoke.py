import json
import os
from pathlib import Path

import pytest

import talkdoc

SCRIPTS = Path(os.environ.get("TALKDOC_SCRIPTS_DIR", Path(__file__).resolve().parents[2] / "scripts"))

ANTI_THEFT = [
    ("Title «anti theft system»", "Document title “Anti Theft System”"),
    ("Heading one «instructions»", "Heading 1 «Instructions»"),
    ("Replace «instructions» with «introduction»", "Heading 1 «Introduction»"),
    ("Dictation mode", "Dictation mode started"),
    (
        "This new system should achieve protection against burglary comma both in the absence and presence of "
        "residents period",
        "This new system should achieve protection against burglary, both in the absence and presence of residents.",
    ),
    (
        "Insert “control” before “system”",
        "This new control system should achieve protection against burglary, both in the absence and presence of "
        "residents.",
    ),
]


def test_tokenize_maps_spoken_punctuation():
    assert talkdoc.tokenize("hello comma world period") == [
        ("word", "hello"),
        ("punct", ","),
        ("word", "world"),
        ("punct", "."),
    ]
    assert talkdoc.tokenize("") == []


def test_verbalize_and_render():
    tokens = talkdoc.tokenize("one comma two question mark")
    assert talkdoc.render(tokens) == "one, two?"
    assert talkdoc.tokenize(talkdoc.verbalize(tokens)) == tokens
    with pytest.raises(ValueError):
        talkdoc.render([("punct", "x")])


def test_anti_theft_session():
    s = talkdoc.Session()
    for utterance, expected in ANTI_THEFT:
        replies = s.handle(utterance)
        assert [r["literal"] for r in replies] == [expected]
    assert s.mode == "dictation"
    assert s.export("markdown") == (
        "# Anti Theft System\n\n## Introduction\n\nThis new control system should achieve protection against "
        "burglary, both in the absence and presence of residents.\n"
    )
    with pytest.raises(ValueError):
        s.export("docx")


def test_save_load_round_trip():
    s = talkdoc.Session()
    s.handle("Title «notes»")
    saved = s.save()
    assert json.loads(saved)["blocks"][0]["kind"] == "title"
    t = talkdoc.Session()
    t.load(saved)
    assert t.export("plain") == "Notes\n"
    with pytest.raises(talkdoc.FormatError):
        t.load("{broken")


def test_reading_chunks_and_interrupt():
    s = talkdoc.Session()
    assert s.interrupt() is False
    s.handle("Title «a»")
    replies = s.handle("read headings")
    assert replies[0]["kind"] == "reading"
    assert replies[0]["total"] == 1
    assert replies[-1]["literal"] == "Reading finished"


@pytest.mark.parametrize("name", ["table1", "proofreading", "shopping_list", "letter", "report"])
def test_golden_scripts(name):
    passed, report = talkdoc.run_script(str(SCRIPTS / f"{name}.dialog"))
    assert passed, report
    assert "RESULT: PASS" in report


def test_script_errors(tmp_path):
    bad = tmp_path / "bad.dialog"
    bad.write_text("S: orphan\n")
    with pytest.raises(talkdoc.ScriptParseError):
        talkdoc.run_script(str(bad))
    passed, report = talkdoc.run_script(str(SCRIPTS / "table1.dialog"), report="json")
    assert passed and json.loads(report)["turns"] == 6
