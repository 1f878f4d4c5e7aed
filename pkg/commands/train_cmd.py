# commands/train_cmd.py

"""
train_cmd.py – `train` Subcommand

Builds the vocabulary from the training records, trains the classifier with
early stopping and writes the best-epoch checkpoint plus the epoch history.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging

from config import RunConfig
from figprune_db import CheckpointRepository, HistoryRepository
from model import FigurativeClassifier
from training import Checkpoint, EpochRecord, train
from utils.corpus import CorpusRecord, corpus_fingerprint, encode_split
from utils.tokenizer import build_vocab
from .common import FORMATTER, add_task_argument, echo_config, load_corpus, prepare_splits, run_config, sibling

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "train", parents=parents, formatter_class=FORMATTER,
        help="train a classifier",
        description="Train the encoder + BiLSTM classifier and keep the epoch with the lowest validation loss.",
    )
    parser.add_argument("--corpus", required=True, help="corpus TSV")
    parser.add_argument("--out", default="model.ckpt", help="checkpoint path; history goes to <stem>.history.csv")
    add_task_argument(parser)
    parser.add_argument("--subset", type=int, default=None, help="balanced subset size, even (config: data.subset)")
    parser.add_argument("--max-epochs", type=int, default=None, help="config: train.max_epochs")
    parser.add_argument("--patience", type=int, default=None, help="config: train.patience")
    parser.add_argument("--batch-size", type=int, default=None, help="config: train.batch_size")
    parser.add_argument("--learning-rate", type=float, default=None, help="config: train.learning_rate")
    parser.set_defaults(handler=train_cmd)


def fit_checkpoint(records: list[CorpusRecord], config: RunConfig) -> tuple[Checkpoint, list[EpochRecord]]:
    """Vocabulary, model and training run for `records` under `config`."""
    task = config.task
    splits = prepare_splits(records, task, config.data, config.train.seed)
    vocab = build_vocab(
        (r["sentence"] for r in splits.train + splits.validation), config.model.vocab_size
    )
    model_config = dataclasses.replace(config.model, vocab_size=len(vocab))
    logger.info(
        f"Training on {len(splits.train)} records, validating on {len(splits.validation)}; "
        f"vocabulary of {len(vocab)} pieces"
    )
    model = FigurativeClassifier(model_config, seed=config.train.seed)
    return train(
        model,
        encode_split(splits.train, vocab, model_config.max_len, task),
        encode_split(splits.validation, vocab, model_config.max_len, task),
        config.train,
        vocab,
        task,
        corpus_fingerprint(records),
    )


def train_cmd(args: argparse.Namespace) -> int:
    config = run_config(args, **{
        "data.subset": args.subset,
        "train.max_epochs": args.max_epochs,
        "train.patience": args.patience,
        "train.batch_size": args.batch_size,
        "train.learning_rate": args.learning_rate,
    })
    checkpoint, history = fit_checkpoint(load_corpus(args.corpus), config)
    CheckpointRepository(args.out).save(checkpoint)
    HistoryRepository(sibling(args.out, ".history.csv")).save(history)
    echo_config(config, sibling(args.out, ".config.json"))
    return 0
