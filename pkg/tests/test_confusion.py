#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import math
import random

import pytest
from conftest import gen_dataset

import csc_bench.confusion
from csc_bench.confusion import ConfusionSet, MisspellingPair, SplitSpec, Tag
from csc_bench.exceptions import ConfusionParseError, InvariantError, SeenPairError, SplitError


def gen_confusion(pair_list):
    return csc_bench.confusion.build([MisspellingPair(k, v, tag) for k, v, tag in pair_list])[0]


######################################################################
def test_parse_confusion():
    confusion, num_duplicate = csc_bench.confusion.parse_confusion("是\t适\tP\n规\t现\tG")

    assert csc_bench.confusion.stats(confusion) == (2, 2)
    assert num_duplicate == 0
    assert confusion.tag("是", "适") == Tag.PHONETIC
    assert confusion.tag("规", "现") == Tag.GRAPHIC


def test_parse_confusion_empty():
    confusion, num_duplicate = csc_bench.confusion.parse_confusion("")

    assert confusion.is_empty()
    assert csc_bench.confusion.stats(confusion) == (0, 0)


def test_parse_confusion_duplicate(caplog):
    confusion, num_duplicate = csc_bench.confusion.parse_confusion("a\tb\tP\na\tb\tG")

    assert csc_bench.confusion.stats(confusion) == (1, 1)
    assert confusion.tag("a", "b") == Tag.BOTH
    assert num_duplicate == 1
    assert "duplicate" in caplog.text


def test_parse_confusion_comment():
    confusion, _ = csc_bench.confusion.parse_confusion("# 見出し\n\n是\t适\tPG\r\n")

    assert confusion["是"] == ("适",)
    assert confusion.tag("是", "适") == Tag.BOTH


@pytest.mark.parametrize(
    "text, line_no",
    [
        ("a\tb", 1),
        ("a\tb\tP\tx", 1),
        ("ab\tc\tP", 1),
        ("a\t\tP", 1),
        ("a\ta\tP", 1),
        ("# comment\na\tb\tX", 2),
    ],
)
def test_parse_confusion_error(text, line_no):
    with pytest.raises(ConfusionParseError) as e:
        csc_bench.confusion.parse_confusion(text)

    assert e.value.line_no == line_no
    assert "line {line_no}".format(line_no=line_no) in str(e.value)


def test_load_confusion_invalid_utf8():
    with pytest.raises(ConfusionParseError) as e:
        csc_bench.confusion.load_confusion(b"a\tb\tP\n\xff\tb\tP\n")

    assert e.value.line_no == 2


def test_dump_confusion(confusion_text):
    confusion, _ = csc_bench.confusion.parse_confusion(confusion_text)

    assert csc_bench.confusion.dump_confusion(confusion) == confusion_text
    assert csc_bench.confusion.parse_confusion(csc_bench.confusion.dump_confusion(confusion))[0] == confusion


def test_pair_invariant():
    with pytest.raises(InvariantError):
        MisspellingPair("a", "a")
    with pytest.raises(InvariantError):
        MisspellingPair("ab", "c")
    with pytest.raises(InvariantError):
        ConfusionSet({"a": []})


######################################################################
def test_merge_identity(confusion):
    assert csc_bench.confusion.merge(confusion, ConfusionSet()) == confusion


def test_merge_tag():
    merged = csc_bench.confusion.merge(
        gen_confusion([("a", "x", Tag.PHONETIC)]), gen_confusion([("a", "x", Tag.GRAPHIC)])
    )

    assert merged.num_pairs == 1
    assert merged.tag("a", "x") == Tag.BOTH


def test_merge_shared_pair():
    a = gen_confusion([("a", "x", Tag.PHONETIC), ("a", "y", Tag.PHONETIC)])
    b = gen_confusion([("a", "y", Tag.PHONETIC), ("b", "z", Tag.GRAPHIC)])

    merged = csc_bench.confusion.merge(a, b)

    assert merged.num_pairs == 3
    assert merged.pair_set() == a.pair_set() | b.pair_set()
    assert merged.pair_set() == csc_bench.confusion.merge(b, a).pair_set()


######################################################################
def test_filter_by_tag():
    confusion = gen_confusion([("a", "x", Tag.PHONETIC), ("a", "y", Tag.GRAPHIC)])

    assert csc_bench.confusion.filter_by_tag(confusion, Tag.PHONETIC).pair_set() == {("a", "x")}
    assert csc_bench.confusion.filter_by_tag(confusion, Tag.GRAPHIC).pair_set() == {("a", "y")}


def test_filter_by_tag_both():
    confusion = gen_confusion([("a", "x", Tag.BOTH)])
    filtered = csc_bench.confusion.filter_by_tag(confusion, Tag.GRAPHIC)

    assert filtered.pair_set() == {("a", "x")}
    assert filtered.tag("a", "x") == Tag.BOTH


def test_filter_by_tag_empty():
    confusion = gen_confusion([("a", "x", Tag.PHONETIC), ("b", "y", Tag.PHONETIC)])

    assert csc_bench.confusion.filter_by_tag(confusion, Tag.GRAPHIC).is_empty()


def test_filter_by_tag_subset(confusion):
    s_p = csc_bench.confusion.filter_by_tag(confusion, Tag.PHONETIC)
    s_g = csc_bench.confusion.filter_by_tag(confusion, Tag.GRAPHIC)

    assert s_p.pair_set() <= confusion.pair_set()
    assert s_g.pair_set() <= confusion.pair_set()
    assert s_p.pair_set() | s_g.pair_set() == confusion.pair_set()


def test_stats():
    assert csc_bench.confusion.stats(ConfusionSet()) == (0, 0)
    assert csc_bench.confusion.stats(
        gen_confusion([("a", "x", Tag.BOTH), ("a", "y", Tag.BOTH), ("b", "z", Tag.BOTH)])
    ) == (2, 3)


######################################################################
def check_split(confusion, spec, result):
    result.verify(confusion)

    train_keys = set(result.s_train.keys())
    assert train_keys.isdisjoint(result.s_unseen_k.keys())

    for key in result.s_unseen_v.keys():
        assert set(result.s_unseen_v[key]).isdisjoint(result.s_train.get(key))
        # NOTE: 値を一部だけ取り出したキーには min_train_values 個以上の値が残る
        assert len(result.s_train[key]) >= spec.min_train_values

    part_list = [result.s_train.pair_set(), result.s_unseen_k.pair_set(), result.s_unseen_v.pair_set()]
    assert sum(len(part) for part in part_list) == confusion.num_pairs
    assert frozenset().union(*part_list) == confusion.pair_set()

    assert len(result.s_unseen_k) == math.floor(spec.key_holdout_frac * len(confusion) + 1e-9)


def test_split_degenerate(confusion):
    spec = SplitSpec(seed=1, key_holdout_frac=0.0, value_key_frac=0.0)
    result = csc_bench.confusion.split(confusion, spec)

    assert result.s_train == confusion
    assert result.s_unseen_k.is_empty()
    assert result.s_unseen_v.is_empty()


def test_split_small():
    confusion = gen_confusion(
        [
            ("a", "x", Tag.BOTH),
            ("a", "y", Tag.BOTH),
            ("a", "z", Tag.BOTH),
            ("b", "u", Tag.BOTH),
            ("c", "v", Tag.BOTH),
            ("c", "w", Tag.BOTH),
        ]
    )
    spec = SplitSpec(seed=7, key_holdout_frac=1 / 3, value_key_frac=1.0, value_holdout_frac=0.4)
    result = csc_bench.confusion.split(confusion, spec)

    check_split(confusion, spec, result)
    assert len(result.s_unseen_k) == 1

    for key in set(confusion.keys()) - set(result.s_unseen_k.keys()):
        num_value = len(confusion[key])
        if num_value < 2:
            assert key not in result.s_unseen_v
            continue
        expect = min(math.ceil(0.4 * num_value), num_value - 1)
        assert len(result.s_unseen_v[key]) == expect
        assert len(result.s_train[key]) == num_value - expect

    # NOTE: 保留する値の数は ⌈0.4 × 3⌉ = 2 (1 ではない)．a には x だけが残る
    assert set(result.s_unseen_k.keys()) == {"c"}
    assert set(result.s_unseen_v.keys()) == {"a"}
    assert set(result.s_unseen_v["a"]) == {"y", "z"}
    assert result.s_train["a"] == ("x",)
    assert result.s_train["b"] == ("u",)


def test_split_randomized():
    rnd = random.Random(20240101)
    for _ in range(100):
        pair_list = []
        for i in range(rnd.randint(1, 200)):
            key = chr(0x4E00 + i)
            for j in rnd.sample(range(500), rnd.randint(1, 8)):
                pair_list.append((key, chr(0x6000 + j), rnd.choice(list(Tag))))
        confusion = gen_confusion(pair_list)

        spec = SplitSpec(
            seed=rnd.getrandbits(64),
            key_holdout_frac=rnd.random(),
            value_key_frac=rnd.random(),
            value_holdout_frac=rnd.uniform(0.01, 0.99),
            min_train_values=rnd.randint(1, 3),
        )
        check_split(confusion, spec, csc_bench.confusion.split(confusion, spec))


def test_split_deterministic(confusion_text):
    confusion, _ = csc_bench.confusion.parse_confusion(confusion_text)

    line_list = confusion_text.splitlines(keepends=True)
    random.Random(3).shuffle(line_list)
    shuffled, _ = csc_bench.confusion.parse_confusion("".join(line_list))

    spec = SplitSpec(seed=42)
    a = csc_bench.confusion.split(confusion, spec)
    b = csc_bench.confusion.split(shuffled, spec)

    # NOTE: ファイル上の行の順序に依らず同じ分割になる
    assert a.s_train.pair_set() == b.s_train.pair_set()
    assert a.s_unseen_k.pair_set() == b.s_unseen_k.pair_set()
    assert a.s_unseen_v.pair_set() == b.s_unseen_v.pair_set()

    c = csc_bench.confusion.split(confusion, SplitSpec(seed=43))
    assert (a.s_unseen_k.pair_set(), a.s_unseen_v.pair_set()) != (
        c.s_unseen_k.pair_set(),
        c.s_unseen_v.pair_set(),
    )


def test_split_keeps_tag(confusion):
    result = csc_bench.confusion.split(confusion, SplitSpec(seed=5))

    for part in [result.s_train, result.s_unseen_k, result.s_unseen_v]:
        for pair in part.pairs():
            assert pair.tag == confusion.tag(pair.key, pair.value)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"key_holdout_frac": -0.1},
        {"key_holdout_frac": 1.5},
        {"value_key_frac": 2.0},
        {"value_holdout_frac": 0.0},
        {"value_holdout_frac": 1.0},
        {"min_train_values": 0},
    ],
)
def test_split_spec_error(kwargs):
    with pytest.raises(SplitError):
        SplitSpec(seed=0, **kwargs)


def test_split_empty():
    with pytest.raises(SplitError):
        csc_bench.confusion.split(ConfusionSet(), SplitSpec(seed=0))


def test_split_verify_detects_leak(confusion):
    result = csc_bench.confusion.split(confusion, SplitSpec(seed=5))
    key = result.s_unseen_k.keys()[0]

    leaked = csc_bench.confusion.SplitResult(
        csc_bench.confusion.merge(result.s_train, gen_confusion([(key, result.s_unseen_k[key][0], Tag.BOTH)])),
        result.s_unseen_k,
        result.s_unseen_v,
    )
    with pytest.raises(InvariantError):
        leaked.verify(confusion)


######################################################################
def test_extract_seen_pairs():
    dataset = gen_dataset([("语言适有现律可循的", "语言是有规律可循的")])
    source = gen_confusion([("是", "适", Tag.PHONETIC), ("规", "现", Tag.GRAPHIC)])

    s_seen = csc_bench.confusion.extract_seen_pairs(dataset, 2, 0, source)

    assert s_seen.pair_set() == {("是", "适"), ("规", "现")}
    assert s_seen.tag("是", "适") == Tag.PHONETIC
    assert s_seen.tag("规", "现") == Tag.GRAPHIC

    assert csc_bench.confusion.extract_seen_pairs(dataset, 2, 0).tag("是", "适") == Tag.BOTH


def test_extract_seen_pairs_deterministic():
    dataset = gen_dataset([("语言适有现律可循的", "语言是有规律可循的")])

    a = csc_bench.confusion.extract_seen_pairs(dataset, 1, 11)
    b = csc_bench.confusion.extract_seen_pairs(dataset, 1, 11)

    assert a.num_pairs == 1
    assert a == b


def test_extract_seen_pairs_sample():
    target = "abcdefghij"
    source = "ABCDEFGHIJ"
    dataset = gen_dataset([(source[:i] + target[i:], target) for i in range(1, len(target) + 1)])
    realized = {(t, s) for s, t in zip(source, target)}

    s_seen = csc_bench.confusion.extract_seen_pairs(dataset, 4, 99)

    assert s_seen.num_pairs == 4
    assert s_seen.pair_set() <= realized


def test_extract_seen_pairs_error():
    dataset = gen_dataset([("abc", "abc")])

    with pytest.raises(SeenPairError, match="no observed pairs"):
        csc_bench.confusion.extract_seen_pairs(dataset, 5, 0)
