import json
import re
from pathlib import Path

import pytest

from kahler_spacetime.audit import run_audit
from kahler_spacetime.catalog import load_metric_dict

README = Path(__file__).resolve().parent.parent / "README.md"
BLOCKS = re.findall(r"```json\n(.*?)```", README.read_text(encoding="utf-8"), re.S)


def test_readme_has_three_metric_examples():
    assert len(BLOCKS) == 3


@pytest.mark.parametrize("text", BLOCKS, ids=lambda t: json.loads(t)["name"])
def test_readme_examples_load_and_pass(text):
    entry = load_metric_dict(json.loads(text), "README")
    assert run_audit(entry, points=3)["passed"]
