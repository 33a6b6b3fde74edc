import pathlib

import pytest

import radmine

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_tag_and_segment():
    tokens = radmine.tag("The pleural effusion resolved.")
    assert [t[0] for t in tokens] == ["The", "pleural", "effusion", "resolved", "."]
    assert tokens[2][1:3] == (12, 20)
    assert all(t[3] for t in tokens)
    assert radmine.segment("CT was done. No effusion was seen.") == [
        "CT was done.",
        "No effusion was seen.",
    ]


def test_noun_phrases_and_aggregate():
    nps = radmine.noun_phrases("The pleural effusion resolved.", "a:0:1")
    assert [np[1] for np in nps] == ["pleural effusion"]
    stats = radmine.aggregate([("lung", "a:0:0"), ("nodule", "a:0:1"), ("lung", "b:0:0")])
    assert stats[0] == ("lung", 2, ["a:0:0", "b:0:0"])
    assert stats[1][:2] == ("nodule", 1)


def test_featurize_is_deterministic():
    a = radmine.featurize("Ground glass opacity in both lungs.")
    assert a == radmine.featurize("Ground glass opacity in both lungs.")
    dim = radmine.default_config()["classifier"]["features"]["dimension"]
    assert all(0 <= i < dim for i, _ in a)


def seed_rows():
    rows = []
    for line in (DATA / "demo" / "seed.tsv").read_text().splitlines()[1:]:
        if not line or line.startswith("#"):
            continue
        sid, label, text = line.split("\t", 2)
        rows.append((sid, text, label))
    return rows


def test_train_reproduces_demo_model():
    model, metrics = radmine.train(seed_rows())
    assert model.hash == "9877a06b42624bbf"
    assert model.to_bytes() == (DATA / "demo" / "model.bin").read_bytes()
    assert metrics["validation"]["count"] + metrics["train_count"] == 240
    loaded = radmine.Model.load(str(DATA / "demo" / "model.bin"))
    text = "Chest CT showed bilateral ground glass opacities."
    assert loaded.score(text) == model.score(text)
    assert 0.0 < model.score(text) < 1.0


def test_rank_and_precision():
    ranked = radmine.rank([("a:0:0", 0.5, 0.0), ("b:0:0", 0.9, 2.2), ("c:0:0", 0.9, 2.2)])
    assert [r[0] for r in ranked] == ["b:0:0", "c:0:0", "a:0:0"]
    truth = {"a:0:0": "positive", "b:0:0": "positive", "c:0:0": "negative"}
    assert radmine.precision_at_k(ranked, truth, 2) == 0.5


def test_session_roundtrip(tmp_path):
    rows = seed_rows()
    seed = tmp_path / "seed.tsv"
    seed.write_text(
        "sentence_id\tlabel\ttext\n"
        + "".join(f"{sid}\t{label}\t{text}\n" for sid, text, label in rows[:200])
    )
    pool = tmp_path / "pool.tsv"
    pool.write_text(
        "sentence_id\tbegin\tend\ttext\n"
        + "".join(
            f"pool:0:{i}\t0\t{len(text)}\t{text}\n" for i, (_, text, _) in enumerate(rows[200:])
        )
    )
    config = {"seed": 3, "bootstrap": {"queue_size": 10, "fp_quota": 3}}
    session = radmine.Session.create(tmp_path / "s", seed, pool, config)
    queue = session.queue()
    assert len(queue["items"]) == 10
    first = queue["items"][0]["sentence_id"]
    ack = session.submit(first, "negative")
    assert ack["fp_collected"] == 1
    with pytest.raises(radmine.BootstrapError) as err:
        session.submit(first, "negative")
    assert err.value.code == "duplicate_label"
    with pytest.raises(radmine.BootstrapError) as err:
        session.close()
    assert err.value.code == "quota_unmet"
    assert err.value.remaining == 2

    replayed = radmine.Session.replay(tmp_path / "s" / "events.jsonl", tmp_path / "r")
    assert replayed.digest == session.digest
    loaded = radmine.Session.load(tmp_path / "s")
    assert loaded.digest == session.digest
    assert loaded.queue()["fp_collected"] == 1
