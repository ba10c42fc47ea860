import json

import pytest

import psytab


@pytest.fixture
def schema():
    s = psytab.DisorderSchema.make("toy", ["it1", "it2", "it3"])
    s.age_domain = ["20", "30", "40"]
    s.validate()
    return s


def fill(schema, rows):
    table = psytab.CategoricalTable(schema)
    for row in rows:
        table.append_row(row)
    return table


def test_schema_and_table(schema):
    assert schema.columns() == ["sex", "age", "it1", "it2", "it3"]
    table = fill(schema, [["female", "20", "0", "1", "2"]])
    assert table.row_count() == 1
    assert table.row_tokens(0)[0] == "female"
    with pytest.raises(psytab.PsytabError):
        fill(schema, [["female", "20", "0", "1", "7"]])


def test_fidelity_metrics(schema):
    real = fill(schema, [["female", "20", "0", "1", "2"], ["male", "30", "3", "4", "0"]])
    assert psytab.mean_jsd(real, real) == 0.0
    assert psytab.energy_distance_sq(real, real) == 0.0
    err, comp = psytab.mae_v(real, real)
    assert err == pytest.approx(0.0)
    assert comp == pytest.approx(1.0)

    report = psytab.fidelity_report(real, real)
    assert report["mean_jsd"] == 0.0
    assert "per_column_jsd" in report


def test_privacy_metrics(schema):
    real = fill(schema, [["female", "20", "0", "1", "2"], ["male", "30", "3", "4", "0"]])
    syn = fill(schema, [["female", "20", "0", "1", "2"], ["male", "40", "3", "4", "0"]])
    assert psytab.exact_overlap(syn, real) == 0.5
    report = psytab.privacy_report(syn, real, [])
    assert set(report) == {
        "exact_overlap",
        "nn_q05_normalized",
        "nn_q05_hamming",
        "near_match_share_le1",
        "k_map_risk_avg",
    }


def test_generation_round_trip(schema):
    table, log = psytab.generate_mock_dataset(4, schema, master_seed=11)
    assert table.row_count() == 4
    assert log["generated"] == 4
    assert log["patients"][0]["items"][0]["item_id"] == "it1"

    again, log2 = psytab.generate_mock_dataset(4, schema, master_seed=11)
    assert [again.row_tokens(r) for r in range(4)] == [table.row_tokens(r) for r in range(4)]
    assert json.dumps(log2, sort_keys=True) == json.dumps(log, sort_keys=True)

    base = psytab.random_baseline(table, 3)
    assert base.row_count() == 4


def test_selection(schema):
    real = fill(
        schema,
        [
            ["female", "20", "0", "1", "2"],
            ["male", "30", "3", "4", "0"],
            ["female", "40", "2", "2", "2"],
            ["male", "20", "1", "0", "4"],
        ],
    )
    train, tune = psytab.stratified_split(real, 0.5, "sex", 7)
    assert train.row_count() + tune.row_count() == 4

    far = fill(
        schema,
        [["female", "30", "4", "3", "3"], ["male", "40", "0", "2", "1"]],
    )
    scores = psytab.score_candidate(far, train, tune)
    record = psytab.CandidateRecord()
    record.candidate_id = "only"
    record.scores = scores
    winner, mode = psytab.select([record], psytab.GateConfig())
    assert winner == "only"
    assert mode in ("gated", "fallback")


def test_parse_score_and_chunking():
    assert psytab.parse_score("feels bad\nSCORE: 3\n", ["0", "1", "2", "3", "4"]) == "3"
    with pytest.raises(psytab.PsytabError):
        psytab.parse_score("no score here", ["0", "1"])
    chunks = psytab.chunk_text("one para\n\ntwo para")
    assert chunks == ["one para", "two para"]
