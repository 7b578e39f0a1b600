import warnings

import pytest

from moff.data import (KEYWORD_LEXICON, NEUTRAL_LEXICON, NOT, OFF, DataError, DataRecord,
                       DatasetStats, check_reference_stats, load_tsv, normalize_label, parse_tsv,
                       read_predictions, save_tsv, stats, synth_corpus, write_predictions)


@pytest.mark.parametrize("raw, label", [("OFF", OFF), ("offensive", OFF), ("Not", NOT),
                                        ("not offensive", NOT), ("NOT_OFFENSIVE", NOT),
                                        ("  Not   Offensive ", NOT)])
def test_label_aliases(raw, label):
    assert normalize_label(raw) == label


@pytest.mark.parametrize("raw", ["hate", "", "offens"])
def test_unknown_labels(raw):
    with pytest.raises(DataError):
        normalize_label(raw)


def test_parse_with_header_and_blank_lines():
    recs = parse_tsv(["id\ttext\tlabel\n", "1\thello there\tOFF\n", "\n", "2\tbye\tNOT\n"])
    assert recs == [DataRecord("1", "hello there", OFF), DataRecord("2", "bye", NOT)]


def test_unlabeled_rows():
    assert parse_tsv(["7\tsome text"])[0].label is None


def test_bad_row_names_line():
    with pytest.raises(DataError, match="line 2"):
        parse_tsv(["1\ta\tOFF", "2\tb\tc\td"])
    with pytest.raises(DataError, match="line 1"):
        parse_tsv(["1\ta\tmaybe"])


def test_round_trip(tmp_path):
    recs = [DataRecord("a", "x y", OFF), DataRecord("b", "z", NOT)]
    save_tsv(recs, tmp_path / "d.tsv", header=True)
    assert load_tsv(tmp_path / "d.tsv") == recs


def test_stats_and_reference():
    recs = [DataRecord(str(i), "t", OFF if i % 3 == 0 else NOT) for i in range(9)]
    assert stats(recs).as_tuple() == (3, 6, 9)
    assert check_reference_stats(DatasetStats(1953, 2047, 4000))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not check_reference_stats(DatasetStats(3, 6, 9))
    with pytest.warns(UserWarning):
        assert not check_reference_stats(DatasetStats(2000, 2000, 4000))


def test_stats_needs_labels():
    with pytest.raises(DataError):
        stats([DataRecord("1", "t")])


def test_predictions_round_trip(tmp_path):
    rows = [("a", OFF, 0.1 + 0.2), ("b", NOT, 1e-7)]
    write_predictions(rows, tmp_path / "p.tsv")
    assert read_predictions(tmp_path / "p.tsv") == rows


def test_synth_shape_and_balance():
    train, test = synth_corpus(7, 500, 200)
    assert len(train) == 500 and len(test) == 200
    assert stats(train).as_tuple() == (250, 250, 500)
    assert stats(test).as_tuple() == (100, 100, 200)
    assert not {r.id for r in train} & {r.id for r in test}


def test_synth_is_keyword_separable():
    train, _ = synth_corpus(3, 100, 20)
    keywords = set(KEYWORD_LEXICON)
    for r in train:
        words = r.text.split()
        assert (r.label == OFF) == bool(keywords & set(words))
        assert set(words) <= keywords | set(NEUTRAL_LEXICON)


def test_synth_is_seeded():
    assert synth_corpus(1, 20, 20) == synth_corpus(1, 20, 20)
    assert synth_corpus(1, 20, 20) != synth_corpus(2, 20, 20)


def test_synth_rejects_tiny_splits():
    with pytest.raises(ValueError):
        synth_corpus(1, 5, 20)
