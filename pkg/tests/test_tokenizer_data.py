import numpy as np
import pytest

from config import CLS_ID, PAD_ID, SEP_ID, SYNTHETIC_MARKERS, UNK_ID, TaskSpec
from figprune_db import CorpusRepository
from utils.corpus import (
    balanced_subset,
    bind_labels,
    corpus_fingerprint,
    encode_split,
    make_synthetic_corpus,
    split_dataset,
)
from utils.errors import DataError, SchemaError, UsageError
from utils.tokenizer import Vocabulary, build_vocab, tokenize

HEADER = "id\texpression\tsentence\tidiom\tmetaphor\tsplit\n"


def write(tmp_path, text, name="corpus.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# ── tokenizer ───────────────────────────────────────────────

def test_small_vocabulary_by_hand():
    vocab = build_vocab(["a b", "a"], target_size=6)
    assert vocab.pieces == ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "a", "b")
    ids, mask = tokenize("a b", vocab, max_len=6)
    assert ids.tolist() == [CLS_ID, vocab.id_of("a"), vocab.id_of("b"), SEP_ID, PAD_ID, PAD_ID]
    assert mask.tolist() == [True, True, True, True, False, False]


def test_empty_sentence_is_cls_sep_then_padding():
    vocab = build_vocab(["x"], target_size=8)
    ids, mask = tokenize("", vocab, max_len=5)
    assert ids.tolist() == [CLS_ID, SEP_ID, PAD_ID, PAD_ID, PAD_ID]
    assert mask.sum() == 2


def test_long_sentence_is_truncated_with_sep_last():
    vocab = build_vocab(["w"], target_size=8)
    ids, mask = tokenize(" ".join(["w"] * 300), vocab, max_len=128)
    assert ids.shape == (128,)
    assert ids[0] == CLS_ID and ids[127] == SEP_ID
    assert mask.all()


def test_unknown_characters_fall_back_to_unk():
    vocab = build_vocab(["ab"], target_size=20)
    ids, _ = tokenize("abz", vocab, max_len=6)
    assert ids.tolist()[:4] == [CLS_ID, vocab.id_of("ab"), UNK_ID, SEP_ID]


def test_words_split_into_longest_known_pieces():
    vocab = build_vocab(["ab ab ab", "c"], target_size=8)
    ids, _ = tokenize("abc", vocab, max_len=6)
    assert ids.tolist()[:4] == [CLS_ID, vocab.id_of("ab"), vocab.id_of("c"), SEP_ID]


def test_vocabulary_respects_target_size_and_rejects_tiny_targets():
    sentences = ["the quick brown fox", "jumps over the lazy dog"]
    assert len(build_vocab(sentences, target_size=10)) == 10
    with pytest.raises(UsageError):
        build_vocab(sentences, target_size=4)


def test_vocabulary_must_start_with_reserved_pieces():
    with pytest.raises(DataError):
        Vocabulary(("a", "b"))


# ── corpus files ────────────────────────────────────────────

def test_header_only_file_is_an_empty_corpus(tmp_path):
    assert CorpusRepository(write(tmp_path, HEADER)).load() == []


def test_full_row_and_label_normalization(tmp_path):
    path = write(tmp_path, HEADER + "k-1\tkaan dhor\tHe was all ears.\tyes \tNO\ttrain\n")
    (record,) = CorpusRepository(path).load()
    assert record == {
        "id": "k-1",
        "expression": "kaan dhor",
        "sentence": "He was all ears.",
        "idiom": "Yes",
        "metaphor": "No",
        "split": "train",
    }


def test_metaphor_column_is_optional(tmp_path):
    path = write(tmp_path, "ID\tExpression\tSentence\tIdiom\tSplit\nx\t\tsome words\tNo\ttest\n")
    (record,) = CorpusRepository(path).load()
    assert record["metaphor"] is None
    assert record["split"] == "test"


def test_missing_column_is_a_schema_error(tmp_path):
    path = write(tmp_path, "id\tsentence\tsplit\nx\twords\ttrain\n")
    with pytest.raises(SchemaError, match="idiom"):
        CorpusRepository(path).load()


def test_bad_label_cites_row_and_id(tmp_path):
    path = write(tmp_path, HEADER + "a\t\tok\tYes\tNo\ttrain\nb\t\tbad\tmaybe\tNo\ttrain\n")
    with pytest.raises(DataError, match=r"row 3 \(id 'b'\)"):
        CorpusRepository(path).load()


def test_duplicate_id_is_rejected(tmp_path):
    path = write(tmp_path, HEADER + "a\t\tone\tYes\tNo\ttrain\na\t\ttwo\tNo\tNo\ttrain\n")
    with pytest.raises(DataError, match="duplicate"):
        CorpusRepository(path).load()


def test_missing_file_is_a_usage_error(tmp_path):
    with pytest.raises(UsageError, match="not found"):
        CorpusRepository(tmp_path / "absent.tsv").load()


def test_corpus_round_trip(tmp_path):
    records = make_synthetic_corpus(20, 0.5, seed=3)
    repo = CorpusRepository(tmp_path / "c.tsv")
    repo.save(records)
    assert repo.load() == records


def test_save_rejects_tabs_in_fields(tmp_path):
    records = make_synthetic_corpus(2, 0.5, seed=0)
    records[0]["sentence"] = "has\ta tab"
    with pytest.raises(DataError, match="tab"):
        CorpusRepository(tmp_path / "c.tsv").save(records)


# ── subsets and splits ──────────────────────────────────────

def test_balanced_subset_of_two_hundred():
    records = make_synthetic_corpus(400, 0.5, seed=2)
    task = TaskSpec("idiom")
    subset = balanced_subset(records, task, 200, seed=7)
    labels = bind_labels(subset, task)
    assert len(subset) == 200
    assert labels.sum() == 100
    assert [r["id"] for r in subset] == [r["id"] for r in balanced_subset(records, task, 200, seed=7)]


def test_balanced_subset_edge_cases():
    records = make_synthetic_corpus(20, 0.2, seed=2)
    task = TaskSpec("idiom")
    assert balanced_subset(records, task, 0, seed=1) == []
    with pytest.raises(UsageError):
        balanced_subset(records, task, 5, seed=1)
    with pytest.raises(DataError, match="4 positive"):
        balanced_subset(records, task, 10, seed=1)


def test_synthetic_corpus_is_balanced_for_both_tasks():
    records = make_synthetic_corpus(200, 0.5, seed=7)
    for column in ("idiom", "metaphor"):
        labels = bind_labels(records, TaskSpec(column))
        assert labels.sum() == 100
    assert sum(r["split"] == "test" for r in records) == 40


@pytest.mark.parametrize("n, rate", [(2, 0.5), (4, 0.5), (10, 0.1), (20, 0.05), (10, 0.0), (10, 1.0)])
def test_tiny_or_sparse_synthetic_corpora_still_split(n, rate):
    records = make_synthetic_corpus(n, rate, seed=0)
    assert len(records) == n
    assert bind_labels(records, TaskSpec("idiom")).sum() == round(n * rate)
    test_rows = sum(r["split"] == "test" for r in records)
    assert 1 <= test_rows < n


def test_synthetic_labels_follow_markers():
    for record in make_synthetic_corpus(60, 0.5, seed=4):
        for column, marker in SYNTHETIC_MARKERS.items():
            planted = " ".join(marker) in record["sentence"]
            assert planted == (record[column] == "Yes")


def test_synthetic_corpus_file_is_deterministic(tmp_path):
    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    CorpusRepository(first).save(make_synthetic_corpus(50, 0.5, seed=11))
    CorpusRepository(second).save(make_synthetic_corpus(50, 0.5, seed=11))
    assert first.read_bytes() == second.read_bytes()


def test_split_dataset_holds_out_stratified_validation(synthetic_records, idiom_task):
    splits = split_dataset(synthetic_records, idiom_task, 0.25, seed=0)
    train_ids = {r["id"] for r in splits.train}
    val_ids = {r["id"] for r in splits.validation}
    assert not train_ids & val_ids
    assert len(splits.train) + len(splits.validation) + len(splits.test) == len(synthetic_records)
    assert 0 < bind_labels(splits.validation, idiom_task).sum() < len(splits.validation)
    assert all(r["split"] == "test" for r in splits.test)


def test_encode_split_and_fingerprint(synthetic_records, idiom_task):
    vocab = build_vocab((r["sentence"] for r in synthetic_records), 50)
    encoded = encode_split(synthetic_records[:5], vocab, 16, idiom_task)
    assert encoded.ids.shape == (5, 16)
    assert encoded.record_ids == [r["id"] for r in synthetic_records[:5]]
    assert len(encoded.batch(np.array([0, 2]))) == 2
    assert corpus_fingerprint(synthetic_records) == corpus_fingerprint(list(synthetic_records))
