"""Python bindings for the radmine pipeline.

Structured results are plain Python values; configs are dicts in the same
schema as the CLI's --config file.
"""

import json

from . import _core
from ._core import BootstrapError, Model, aggregate, noun_phrases, rank, segment, tag

__all__ = [
    "BootstrapError",
    "Model",
    "Session",
    "aggregate",
    "default_config",
    "featurize",
    "noun_phrases",
    "precision_at_k",
    "rank",
    "segment",
    "tag",
    "train",
]


def _config(config):
    return "" if config is None else json.dumps(config)


def default_config():
    return json.loads(_core.default_config())


def featurize(text, config=None):
    return _core.featurize(text, _config(config))


def train(rows, config=None):
    """rows: (sentence_id, text, label) with label "positive"/"negative".

    Returns (model, metrics).
    """
    model, metrics = _core.train(list(rows), _config(config))
    return model, json.loads(metrics)


def precision_at_k(ranked, truth, k):
    return _core.precision_at_k(list(ranked), dict(truth), k)


class Session:
    """A bootstrap session backed by an event log in `dir`."""

    def __init__(self, core):
        self._core = core

    @classmethod
    def create(cls, dir, seed_path, pool_path, config=None):
        return cls(_core.Session.create(str(dir), str(seed_path), str(pool_path), _config(config)))

    @classmethod
    def load(cls, dir):
        return cls(_core.Session.load(str(dir)))

    @classmethod
    def replay(cls, log_path, dir):
        return cls(_core.Session.replay(str(log_path), str(dir)))

    def queue(self):
        return json.loads(self._core.queue())

    def history(self):
        return json.loads(self._core.history())

    def submit(self, sentence_id, label, annotator=""):
        return json.loads(self._core.submit(sentence_id, label, annotator))

    def open(self):
        self._core.open()

    def close(self):
        return json.loads(self._core.close())

    @property
    def digest(self):
        return self._core.digest

    @property
    def model_hash(self):
        return self._core.model_hash

    @property
    def events(self):
        return self._core.events
