#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
文レベル・文字レベルの検出/訂正の Accuracy, Precision, Recall, F1 を計算します．

Usage:
  metrics.py -g GOLD -p PRED

Options:
  -g GOLD       : 正解データセット (id<TAB>source<TAB>target)．
  -p PRED       : 予測ファイル (id<TAB>prediction)．
"""

import dataclasses
import functools
import logging

import csc_bench.const
from csc_bench.exceptions import DatasetFormatError, EvaluationError

LEVEL_LIST = ["sentence", "character"]
TASK_LIST = ["detection", "correction"]


@dataclasses.dataclass(frozen=True)
class EvalInstance:
    id: str
    source: str
    target: str
    prediction: str

    def __post_init__(self):
        if not (len(self.source) == len(self.target) == len(self.prediction)):
            raise EvaluationError(
                "length mismatch (source {s}, target {t}, prediction {p})".format(
                    s=len(self.source), t=len(self.target), p=len(self.prediction)
                ),
                [self.id],
            )


@dataclasses.dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    total: int = 0
    exact_correct: int = 0

    def __add__(self, other):
        return Counts(*(a + b for a, b in zip(dataclasses.astuple(self), dataclasses.astuple(other))))


@dataclasses.dataclass(frozen=True)
class LevelScore:
    accuracy: float
    precision: float
    recall: float
    f1: float
    counts: Counts


@dataclasses.dataclass(frozen=True)
class EvalReport:
    sentence_detection: LevelScore
    sentence_correction: LevelScore
    character_detection: LevelScore
    character_correction: LevelScore

    def score(self, level, task):
        return getattr(self, "{level}_{task}".format(level=level, task=task))

    def as_dict(self):
        return {
            "{level}_{task}".format(level=level, task=task): dataclasses.asdict(self.score(level, task))
            for level in LEVEL_LIST
            for task in TASK_LIST
        }


def safe_div(a, b):
    return 0.0 if b == 0 else a / b


def prf_from_counts(counts):
    precision = safe_div(counts.tp, counts.tp + counts.fp)
    recall = safe_div(counts.tp, counts.tp + counts.fn)
    f1 = safe_div(2 * precision * recall, precision + recall)

    return (precision, recall, f1)


def level_score(counts):
    return LevelScore(safe_div(counts.exact_correct, counts.total), *prf_from_counts(counts), counts)


def count_character(instance):
    detect = [0, 0, 0, 0]
    correct = [0, 0, 0, 0]
    for s, t, p in zip(instance.source, instance.target, instance.prediction):
        gold = t != s
        pred = p != s
        hit = gold and pred and (p == t)

        detect[0] += gold and pred
        detect[1] += pred and not gold
        detect[2] += gold and not pred
        detect[3] += gold == pred

        correct[0] += hit
        correct[1] += pred and not hit
        correct[2] += gold and not hit
        correct[3] += p == t

    total = len(instance.source)
    return (
        Counts(detect[0], detect[1], detect[2], total, detect[3]),
        Counts(correct[0], correct[1], correct[2], total, correct[3]),
    )


def count_sentence(instance):
    gold_set = {i for i, (s, t) in enumerate(zip(instance.source, instance.target)) if s != t}
    pred_set = {i for i, (s, p) in enumerate(zip(instance.source, instance.prediction)) if s != p}
    is_fixed = instance.prediction == instance.target

    # NOTE: 検出は「誤り位置の集合が完全に一致」した場合だけ成功とみなす
    detect_tp = (len(gold_set) != 0) and (gold_set == pred_set)
    detect = Counts(
        int(detect_tp),
        int((len(pred_set) != 0) and not detect_tp),
        int((len(gold_set) != 0) and not detect_tp),
        1,
        int(gold_set == pred_set),
    )
    correct = Counts(
        int((len(gold_set) != 0) and is_fixed),
        int((len(pred_set) != 0) and not is_fixed),
        int((len(gold_set) != 0) and not is_fixed),
        1,
        int(is_fixed),
    )

    return (detect, correct)


def count_instance(instance):
    return count_sentence(instance) + count_character(instance)


def sum_counts(count_list):
    return functools.reduce(lambda a, b: tuple(x + y for x, y in zip(a, b)), count_list)


def evaluate(instance_list):
    instance_list = list(instance_list)
    if len(instance_list) == 0:
        raise EvaluationError("no instances to evaluate")

    sent_detect, sent_correct, char_detect, char_correct = sum_counts(
        count_instance(instance) for instance in instance_list
    )

    return EvalReport(
        level_score(sent_detect),
        level_score(sent_correct),
        level_score(char_detect),
        level_score(char_correct),
    )


def keep_correct_accuracy(instance_list):
    instance_list = list(instance_list)
    if len(instance_list) == 0:
        raise EvaluationError("no instances to evaluate")

    offender = [instance.id for instance in instance_list if instance.source != instance.target]
    if len(offender) != 0:
        raise EvaluationError(
            "keep-correct accuracy needs error-free sources", offender[: csc_bench.const.ERROR_LIST_LIMIT]
        )

    return safe_div(
        sum(instance.prediction == instance.target for instance in instance_list), len(instance_list)
    )


def parse_predictions(text):
    prediction_map = {}
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if line == "" or line.startswith(csc_bench.const.COMMENT_PREFIX):
            continue
        field_list = line.split("\t")
        if len(field_list) != 2:
            raise DatasetFormatError(line_no, "expected 2 fields, got {count}".format(count=len(field_list)))

        sentence_id, prediction = field_list
        if sentence_id in prediction_map:
            raise DatasetFormatError(line_no, "duplicate id: {id}".format(id=sentence_id))
        prediction_map[sentence_id] = prediction

    return prediction_map


def load_predictions(data):
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise DatasetFormatError(data.count(b"\n", 0, e.start) + 1, "invalid UTF-8")

    return parse_predictions(text)


def dump_predictions(id_list, prediction_list, header=None):
    line_list = []
    if header is not None:
        line_list.append("{prefix} {header}\n".format(prefix=csc_bench.const.COMMENT_PREFIX, header=header))
    for sentence_id, prediction in zip(id_list, prediction_list):
        line_list.append("{id}\t{prediction}\n".format(id=sentence_id, prediction=prediction))

    return "".join(line_list)


def join_predictions(dataset, prediction_map):
    gold_id = [sentence.id for sentence in dataset]
    gold_id_set = set(gold_id)

    missing = [sentence_id for sentence_id in gold_id if sentence_id not in prediction_map]
    if len(missing) != 0:
        raise EvaluationError(
            "{count:,} ids missing from predictions".format(count=len(missing)),
            missing[: csc_bench.const.ERROR_LIST_LIMIT],
        )

    extra = sorted(sentence_id for sentence_id in prediction_map if sentence_id not in gold_id_set)
    if len(extra) != 0:
        raise EvaluationError(
            "{count:,} ids not in the gold dataset".format(count=len(extra)),
            extra[: csc_bench.const.ERROR_LIST_LIMIT],
        )

    return [
        EvalInstance(sentence.id, sentence.source, sentence.target, prediction_map[sentence.id])
        for sentence in dataset
    ]


def detail_rows(instance_list):
    row_list = []
    for instance in instance_list:
        gold = [i for i, (s, t) in enumerate(zip(instance.source, instance.target)) if s != t]
        pred = [i for i, (s, p) in enumerate(zip(instance.source, instance.prediction)) if s != p]
        row_list.append(
            {
                "id": instance.id,
                "source": instance.source,
                "target": instance.target,
                "prediction": instance.prediction,
                "gold_position": " ".join(str(i) for i in gold),
                "pred_position": " ".join(str(i) for i in pred),
                "detect_ok": gold == pred,
                "correct_ok": instance.prediction == instance.target,
            }
        )

    return row_list


if __name__ == "__main__":
    from docopt import docopt

    import csc_bench.corpus
    import local_lib.logger
    import local_lib.serializer

    args = docopt(__doc__)

    local_lib.logger.init("test", level=logging.INFO)

    dataset = csc_bench.corpus.load_dataset(local_lib.serializer.load_bytes(args["-g"]))
    prediction_map = load_predictions(local_lib.serializer.load_bytes(args["-p"]))

    report = evaluate(join_predictions(dataset, prediction_map))
    for key, value in report.as_dict().items():
        logging.info("{key}: {value}".format(key=key, value=value))
