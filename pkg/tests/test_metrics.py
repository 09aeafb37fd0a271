#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import random

import pytest
from conftest import gen_dataset

import csc_bench.metrics
from csc_bench.exceptions import DatasetFormatError, EvaluationError
from csc_bench.metrics import Counts, EvalInstance


def gen_instance(triple_list):
    return [EvalInstance(str(i), s, t, p) for i, (s, t, p) in enumerate(triple_list)]


def brute_force(instance_list):
    """位置ごとの定義をそのまま数え上げる，評価の参照実装．"""
    result = {}
    for level in ["sentence", "character"]:
        for task in ["detection", "correction"]:
            tp = fp = fn = total = exact = 0
            for x in instance_list:
                n = len(x.source)
                gold = [x.source[i] != x.target[i] for i in range(n)]
                pred = [x.source[i] != x.prediction[i] for i in range(n)]
                if level == "character":
                    for i in range(n):
                        if task == "detection":
                            ok = gold[i] and pred[i]
                            tp += ok
                            fp += pred[i] and not gold[i]
                            fn += gold[i] and not pred[i]
                            exact += gold[i] == pred[i]
                        else:
                            ok = gold[i] and pred[i] and x.prediction[i] == x.target[i]
                            tp += ok
                            fp += pred[i] and not ok
                            fn += gold[i] and not ok
                            exact += x.prediction[i] == x.target[i]
                        total += 1
                else:
                    if task == "detection":
                        ok = gold == pred
                    else:
                        ok = x.prediction == x.target
                    has_gold = any(gold)
                    has_pred = any(pred)
                    tp += has_gold and ok
                    fp += has_pred and not (has_gold and ok)
                    fn += has_gold and not ok
                    exact += ok
                    total += 1

            precision = tp / (tp + fp) if tp + fp else 0.0
            recall = tp / (tp + fn) if tp + fn else 0.0
            f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
            result[(level, task)] = (exact / total, precision, recall, f1, tp, fp, fn)

    return result


def score_tuple(report, level, task):
    score = report.score(level, task)
    return (
        score.accuracy,
        score.precision,
        score.recall,
        score.f1,
        score.counts.tp,
        score.counts.fp,
        score.counts.fn,
    )


######################################################################
@pytest.mark.parametrize(
    "counts, expect",
    [
        (Counts(tp=1, fp=0, fn=0), (1.0, 1.0, 1.0)),
        (Counts(tp=0, fp=5, fn=0), (0.0, 0.0, 0.0)),
        (Counts(tp=1, fp=1, fn=1), (0.5, 0.5, 0.5)),
        (Counts(), (0.0, 0.0, 0.0)),
    ],
)
def test_prf_from_counts(counts, expect):
    assert csc_bench.metrics.prf_from_counts(counts) == pytest.approx(expect)


def test_evaluate_worked_example():
    report = csc_bench.metrics.evaluate(gen_instance([("AXC", "ABC", "ABC"), ("DEF", "DEF", "DGF"), ("GHI", "GHJ", "GHI")]))

    for task in csc_bench.metrics.TASK_LIST:
        char = report.score("character", task)
        assert (char.counts.tp, char.counts.fp, char.counts.fn) == (1, 1, 1)
        assert (char.precision, char.recall, char.f1) == pytest.approx((0.5, 0.5, 0.5))
        assert char.accuracy == pytest.approx(7 / 9)

        sent = report.score("sentence", task)
        assert (sent.precision, sent.recall, sent.f1) == pytest.approx((0.5, 0.5, 0.5))
        assert sent.accuracy == pytest.approx(1 / 3)


def test_evaluate_oracle():
    report = csc_bench.metrics.evaluate(gen_instance([("AXC", "ABC", "ABC"), ("DEF", "DEF", "DEF")]))

    for level in csc_bench.metrics.LEVEL_LIST:
        for task in csc_bench.metrics.TASK_LIST:
            assert report.score(level, task).accuracy == 1.0
            assert report.score(level, task).f1 == 1.0


def test_evaluate_identity():
    report = csc_bench.metrics.evaluate(gen_instance([("AXC", "ABC", "AXC"), ("DEF", "DEF", "DEF")]))

    for level in csc_bench.metrics.LEVEL_LIST:
        assert report.score(level, "detection").recall == 0.0
        assert report.score(level, "correction").recall == 0.0


def test_evaluate_wrong_correction():
    # NOTE: 位置は合っているが文字が違う場合，検出は成功，訂正は失敗
    report = csc_bench.metrics.evaluate(gen_instance([("AXC", "ABC", "AYC")]))

    assert report.character_detection.counts.tp == 1
    assert report.character_correction.counts.tp == 0
    assert report.character_correction.counts.fp == 1
    assert report.character_correction.counts.fn == 1
    assert report.sentence_detection.counts.tp == 1
    assert report.sentence_correction.counts.tp == 0


def test_evaluate_partial_detection():
    # NOTE: 文レベルの検出は誤り位置の集合が完全に一致した場合だけ成功
    report = csc_bench.metrics.evaluate(gen_instance([("AXCY", "ABCD", "ABCY")]))

    assert report.sentence_detection.counts == Counts(tp=0, fp=1, fn=1, total=1, exact_correct=0)
    assert report.character_detection.counts.tp == 1
    assert report.character_detection.counts.fn == 1


def test_evaluate_randomized():
    rnd = random.Random(1234)
    alphabet = "ABC"

    for _ in range(1000):
        triple_list = []
        for _ in range(rnd.randint(1, 4)):
            n = rnd.randint(1, 8)
            source = "".join(rnd.choice(alphabet) for _ in range(n))
            target = "".join(rnd.choice(alphabet) if rnd.random() < 0.3 else c for c in source)
            prediction = "".join(rnd.choice(alphabet) if rnd.random() < 0.3 else c for c in source)
            triple_list.append((source, target, prediction))

        instance_list = gen_instance(triple_list)
        report = csc_bench.metrics.evaluate(instance_list)
        expect = brute_force(instance_list)

        for (level, task), value in expect.items():
            assert score_tuple(report, level, task) == pytest.approx(value)


def test_evaluate_degenerate_level():
    # NOTE: 1 文あたり誤り・編集が高々 1 つなら，文レベルと文字レベルの (tp, fp, fn) は一致する
    rnd = random.Random(77)
    alphabet = "ABCD"

    triple_list = []
    for _ in range(500):
        n = rnd.randint(1, 8)
        target = "".join(rnd.choice(alphabet) for _ in range(n))
        source = list(target)
        if rnd.random() < 0.5:
            i = rnd.randrange(n)
            source[i] = rnd.choice([c for c in alphabet if c != target[i]])
        source = "".join(source)
        prediction = list(source)
        if rnd.random() < 0.5:
            i = rnd.randrange(n)
            prediction[i] = rnd.choice([c for c in alphabet if c != source[i]])
        triple_list.append((source, target, "".join(prediction)))

    report = csc_bench.metrics.evaluate(gen_instance(triple_list))

    for task in csc_bench.metrics.TASK_LIST:
        sent = report.score("sentence", task).counts
        char = report.score("character", task).counts
        assert (sent.tp, sent.fp, sent.fn) == (char.tp, char.fp, char.fn)


def test_evaluate_error():
    with pytest.raises(EvaluationError):
        csc_bench.metrics.evaluate([])

    with pytest.raises(EvaluationError, match="broken"):
        EvalInstance("broken", "ABC", "ABC", "AB")


######################################################################
def test_keep_correct_accuracy():
    assert csc_bench.metrics.keep_correct_accuracy(gen_instance([("AB", "AB", "AB")] * 4)) == 1.0
    assert (
        csc_bench.metrics.keep_correct_accuracy(gen_instance([("AB", "AB", "AB")] * 3 + [("AB", "AB", "AC")]))
        == 0.75
    )


def test_keep_correct_accuracy_error():
    with pytest.raises(EvaluationError):
        csc_bench.metrics.keep_correct_accuracy(gen_instance([("AX", "AB", "AB")]))


######################################################################
def test_predictions_format():
    text = csc_bench.metrics.dump_predictions(["1", "2"], ["ABC", "DEF"], "method=identity")

    assert text.startswith("# method=identity\n")
    assert csc_bench.metrics.parse_predictions(text) == {"1": "ABC", "2": "DEF"}


@pytest.mark.parametrize("text", ["1\tABC\n1\tABD\n", "1\tABC\tX\n", "1\n"])
def test_predictions_format_error(text):
    with pytest.raises(DatasetFormatError):
        csc_bench.metrics.parse_predictions(text)


def test_join_predictions():
    dataset = gen_dataset([("AXC", "ABC"), ("DEF", "DEF")])
    instance_list = csc_bench.metrics.join_predictions(dataset, {"00000002": "DEF", "00000001": "ABC"})

    assert [instance.id for instance in instance_list] == ["00000001", "00000002"]
    assert instance_list[0] == EvalInstance("00000001", "AXC", "ABC", "ABC")


def test_join_predictions_missing():
    dataset = gen_dataset([("AB", "AB")] * 15)

    with pytest.raises(EvaluationError) as e:
        csc_bench.metrics.join_predictions(dataset, {"00000001": "AB"})

    # NOTE: 列挙するのは最大 10 件
    assert len(e.value.ids) == 10
    assert "00000002" in str(e.value)


def test_join_predictions_extra():
    dataset = gen_dataset([("AB", "AB")])

    with pytest.raises(EvaluationError, match="unknown"):
        csc_bench.metrics.join_predictions(dataset, {"00000001": "AB", "unknown": "AB"})


def test_detail_rows():
    row_list = csc_bench.metrics.detail_rows(gen_instance([("AXC", "ABC", "ABC"), ("DEF", "DEF", "DGF")]))

    assert row_list[0]["gold_position"] == "1"
    assert row_list[0]["detect_ok"]
    assert row_list[0]["correct_ok"]
    assert row_list[1]["pred_position"] == "1"
    assert not row_list[1]["detect_ok"]
