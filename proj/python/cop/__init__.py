"""Python access to the cop engine: KB search, scoring, corpus runs, replay."""
import json

from . import _core
from ._core import CopError, accuracy, check_annotation, executability, percent, readability, tokenize

__all__ = [
    "CopError",
    "accuracy",
    "check_annotation",
    "executability",
    "kb_search",
    "kb_validate",
    "percent",
    "readability",
    "replay",
    "run_corpus",
    "tokenize",
]


def kb_search(path, kind, query, platform=None, language=None, k=5):
    return json.loads(_core.kb_search(str(path), kind, query, platform, language, k))


def kb_validate(path, kind):
    return _core.kb_validate(str(path), kind)


def run_corpus(corpus, script, verdicts, kb_dir, config=None):
    cfg = json.dumps(config) if config is not None else ""
    return json.loads(_core.run_corpus(str(corpus), str(script), str(verdicts), str(kb_dir), cfg))


def replay(log_path, kb_dir=""):
    return json.loads(_core.replay_log(str(log_path), str(kb_dir)))
