#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
データセットの統計，誤りペアの被覆率，誤り頻度を変えた評価 (sweep) を行います．

Usage:
  analysis.py -t TEST -r REFERENCE

Options:
  -t TEST       : 被覆率を調べるテストデータセット．
  -r REFERENCE  : 参照する (学習用などの) データセット．
"""

import dataclasses
import logging

import csc_bench.corpus
import csc_bench.metrics
import csc_bench.rng
from csc_bench.exceptions import EvaluationError, SweepError

COVERAGE_NOTE = (
    "The coverage ratio is ambiguous between distinct error-pair types and error-pair tokens; "
    "type-level is the headline figure, token-level is reported alongside."
)


@dataclasses.dataclass(frozen=True)
class DatasetStats:
    num_sentences: int
    num_errors: int
    num_error_pair_types: int


@dataclasses.dataclass(frozen=True)
class CoverageReport:
    test_pair_types: int
    covered_pair_types: int
    type_coverage_pct: float
    test_pair_tokens: int
    covered_pair_tokens: int
    token_coverage_pct: float
    vacuous: bool = False
    note: str = COVERAGE_NOTE


def error_pair_list(dataset):
    return [(error.correct, error.wrong) for sentence in dataset for error in sentence.errors]


def dataset_stats(dataset):
    pair_list = error_pair_list(dataset)
    return DatasetStats(len(dataset), len(pair_list), len(set(pair_list)))


def coverage_pct(covered, total):
    return 100.0 if total == 0 else 100.0 * covered / total


def coverage(test_dataset, reference_dataset):
    reference_pair = set(error_pair_list(reference_dataset))

    token_list = error_pair_list(test_dataset)
    type_set = set(token_list)

    covered_type = sum(pair in reference_pair for pair in type_set)
    covered_token = sum(pair in reference_pair for pair in token_list)

    return CoverageReport(
        len(type_set),
        covered_type,
        coverage_pct(covered_type, len(type_set)),
        len(token_list),
        covered_token,
        coverage_pct(covered_token, len(token_list)),
        vacuous=len(token_list) == 0,
    )


def sweep_seed(seed, p_e):
    return csc_bench.rng.derive_seed(seed, "sweep", repr(float(p_e)))


def check_pe_list(pe_list):
    pe_list = [float(p_e) for p_e in pe_list]
    if len(pe_list) == 0:
        raise SweepError(None, "p_e list is empty")
    for p_e in pe_list:
        if not (0.0 < p_e <= 1.0):
            raise SweepError(p_e, "p_e must be in (0, 1]")
    if len(set(pe_list)) != len(pe_list):
        raise SweepError(None, "p_e list has duplicates")

    return sorted(pe_list)


def sweep(test_pool, confusion, pe_list, corrector, seed, jobs=1, progress=None, set_status=None):
    """
    同じテスト用プールから p_e ごとにデータセットを作って訂正・評価します．

    corrector はデータセット (ParallelSentence のリスト) を受け取って予測文字列のリストを返す callable．
    戻り値は p_e の昇順に並べた (p_e, EvalReport) のリスト．各 p_e は独立した乱数系列を使います．
    """
    result = []
    for p_e in check_pe_list(pe_list):
        if set_status is not None:
            set_status("p_e={p_e} を評価しています...".format(p_e=p_e))

        cfg = csc_bench.corpus.CorruptionConfig(p_e, sweep_seed(seed, p_e))
        dataset = csc_bench.corpus.build_dataset(test_pool, confusion, cfg, jobs, progress)

        try:
            prediction_list = list(corrector(dataset))
        except Exception as e:
            raise SweepError(p_e, "corrector failed: {error}".format(error=e)) from e

        if len(prediction_list) != len(dataset):
            raise SweepError(
                p_e,
                "corrector returned {count} predictions for {total} sentences".format(
                    count=len(prediction_list), total=len(dataset)
                ),
            )

        try:
            report = csc_bench.metrics.evaluate(
                csc_bench.metrics.EvalInstance(sentence.id, sentence.source, sentence.target, prediction)
                for sentence, prediction in zip(dataset, prediction_list)
            )
        except EvaluationError as e:
            raise SweepError(p_e, str(e)) from e

        logging.info(
            "p_e={p_e}: char correct F1 {char:.4f}, sent correct F1 {sent:.4f}".format(
                p_e=p_e, char=report.character_correction.f1, sent=report.sentence_correction.f1
            )
        )
        result.append((p_e, report))

    return result


SWEEP_COLUMN = ["p_e", "level", "task", "accuracy", "precision", "recall", "f1", "tp", "fp", "fn"]


def sweep_rows(sweep_result):
    row_list = []
    for p_e, report in sweep_result:
        for level in csc_bench.metrics.LEVEL_LIST:
            for task in csc_bench.metrics.TASK_LIST:
                score = report.score(level, task)
                row_list.append(
                    {
                        "p_e": p_e,
                        "level": level,
                        "task": task,
                        "accuracy": score.accuracy,
                        "precision": score.precision,
                        "recall": score.recall,
                        "f1": score.f1,
                        "tp": score.counts.tp,
                        "fp": score.counts.fp,
                        "fn": score.counts.fn,
                    }
                )

    return row_list


if __name__ == "__main__":
    from docopt import docopt

    import local_lib.logger
    import local_lib.serializer

    args = docopt(__doc__)

    local_lib.logger.init("test", level=logging.INFO)

    test = csc_bench.corpus.load_dataset(local_lib.serializer.load_bytes(args["-t"]))
    reference = csc_bench.corpus.load_dataset(local_lib.serializer.load_bytes(args["-r"]))

    logging.info(dataset_stats(test))
    logging.info(coverage(test, reference))
