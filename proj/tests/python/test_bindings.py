import json
import random

import pytest

import logicforge

PAYLOAD = json.dumps({
    "schema_version": 1,
    "people": ["Ann", "Ben"],
    "anchor": True,
    "claims": [False],
    "query": 1,
})


def test_single_scores():
    assert logicforge.score_response("web_of_lies", PAYLOAD, "<think>t</think><answer>no</answer>") == 1
    assert logicforge.score_response("web_of_lies", PAYLOAD, "no") == 0
    assert logicforge.score_response("web_of_lies", PAYLOAD, "<think>t</think><answer>yes</answer>") == 0


def test_errors():
    with pytest.raises(KeyError):
        logicforge.score_response("no_such_task", PAYLOAD, "x")
    with pytest.raises(ValueError):
        logicforge.score_response("web_of_lies", "{broken", "x")
    with pytest.raises(ValueError):
        logicforge.score_batch([])
    with pytest.raises(ValueError, match="batch item 1"):
        logicforge.score_batch([("web_of_lies", PAYLOAD, "x"), ("web_of_lies", "[]", "x")])


def test_extract_answer():
    assert logicforge.extract_answer("<think>t</think><answer>A</answer>") == "A"
    assert logicforge.extract_answer("A") is None
    assert logicforge.extract_answer("<think>t</think><answer>A</answer><answer>B</answer>") == "B"


def test_batch_matches_single_calls():
    rng = random.Random(3)
    responses = ["<think>t</think><answer>no</answer>", "<answer>no</answer>",
                 "<think>t</think><answer>yes</answer>", "<think></think><answer> NO </answer>", ""]
    items = [("web_of_lies", PAYLOAD, rng.choice(responses)) for _ in range(1000)]
    assert logicforge.score_batch(items) == [logicforge.score_response(*item) for item in items]
