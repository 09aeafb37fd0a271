#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pytest

import csc_bench.confusion
import csc_bench.corpus

# NOTE: 混淆集合のキーになる文字と，ならない文字
KEY_CHAR = "的一是不了人我在有他这中大来上国个到说们为子和你地出道也时年得就那要下以生会自着去"
VALUE_CHAR = "之过家学对可她里后小么心多天而能好都然没日于起还发成事只作当想看文无开手十用主行方又如前所本见"
PLAIN_CHAR = "，。、山川田林森石木火水金土"

TAG_LABEL_LIST = ["P", "G", "PG"]


def gen_confusion_text(seed=0, num_key=len(KEY_CHAR)):
    rng = np.random.default_rng(seed)

    line_list = []
    for i, key in enumerate(KEY_CHAR[:num_key]):
        num_value = int(rng.integers(1, 6))
        for j in sorted(rng.choice(len(VALUE_CHAR), size=num_value, replace=False)):
            line_list.append(
                "{key}\t{value}\t{tag}\n".format(
                    key=key, value=VALUE_CHAR[j], tag=TAG_LABEL_LIST[(i + int(j)) % len(TAG_LABEL_LIST)]
                )
            )

    return "".join(line_list)


def gen_corpus_text(num_sentence, seed=0, min_len=10, max_len=30):
    rng = np.random.default_rng(seed)
    alphabet = KEY_CHAR + VALUE_CHAR + PLAIN_CHAR

    line_list = []
    for _ in range(num_sentence):
        length = int(rng.integers(min_len, max_len + 1))
        line_list.append("".join(alphabet[int(i)] for i in rng.integers(len(alphabet), size=length)) + "\n")

    return "".join(line_list)


def gen_word_corpus_text(num_sentence, seed=0, num_word=80):
    """
    固定の語彙から語を並べた文を作ります．語の中の文字の並びが決まっているので，
    n-gram で次の文字を予測できます．語彙は seed によらず共通です．
    """
    word_rng = np.random.default_rng(0)
    alphabet = KEY_CHAR + PLAIN_CHAR[2:]
    word_list = [
        "".join(alphabet[int(i)] for i in word_rng.integers(len(alphabet), size=int(word_rng.integers(2, 5))))
        for _ in range(num_word)
    ]

    rng = np.random.default_rng(seed)
    line_list = []
    for _ in range(num_sentence):
        index_list = rng.integers(num_word, size=int(rng.integers(3, 7)))
        line_list.append("".join(word_list[int(i)] for i in index_list) + "。\n")

    return "".join(line_list)


def gen_dataset(pair_list):
    """(source, target) の列から ParallelSentence のリストを作ります．"""
    return [
        csc_bench.corpus.ParallelSentence.from_pair(str(i + 1).zfill(8), source, target)
        for i, (source, target) in enumerate(pair_list)
    ]


@pytest.fixture
def confusion_text():
    return gen_confusion_text()


@pytest.fixture
def confusion(confusion_text):
    return csc_bench.confusion.parse_confusion(confusion_text)[0]


@pytest.fixture
def corpus_text():
    return gen_corpus_text(200)


@pytest.fixture
def sentence_list(corpus_text):
    return csc_bench.corpus.load_corpus(corpus_text.encode("utf-8"))[0]


@pytest.fixture
def data_dir(tmp_path, confusion_text, corpus_text):
    (tmp_path / "confusion.tsv").write_text(confusion_text, encoding="utf-8")
    (tmp_path / "corpus.txt").write_text(corpus_text, encoding="utf-8")

    return tmp_path


@pytest.fixture(autouse=True)
def env_mock(monkeypatch):
    # NOTE: テスト中のログは pytest のハンドラで受ける
    monkeypatch.setenv("NO_COLORED_LOGS", "true")
