#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
評価結果などを JSON / TSV / テキスト表 / Excel の形式で書き出します．
"""

import csv
import dataclasses
import io

import csc_bench.analysis
import csc_bench.metrics
import local_lib.openpyxl_util
import local_lib.serializer

FORMAT_LIST = ["json", "tsv", "text"]

METRIC_COLUMN = ["level", "task", "accuracy", "precision", "recall", "f1", "tp", "fp", "fn", "total"]

DETAIL_SHEET_DEF = {
    "SHEET_TITLE": "文ごとの評価",
    "TABLE_HEADER": {
        "row": {"pos": 2, "height": 20},
        "freeze_col": 2,
        "col": {
            "id": {"label": "ID", "pos": 2, "width": 12, "format": "@"},
            "source": {"label": "入力", "pos": 3, "width": 60, "format": "@", "wrap": True},
            "target": {"label": "正解", "pos": 4, "width": 60, "format": "@", "wrap": True},
            "prediction": {"label": "予測", "pos": 5, "width": 60, "format": "@", "wrap": True},
            "gold_position": {"label": "誤り位置", "pos": 6, "width": 16, "format": "@"},
            "pred_position": {"label": "検出位置", "pos": 7, "width": 16, "format": "@"},
            "detect_ok": {
                "label": "検出",
                "pos": 8,
                "width": 8,
                "conv_func": lambda ok: "○" if ok else "×",
            },
            "correct_ok": {
                "label": "訂正",
                "pos": 9,
                "width": 8,
                "conv_func": lambda ok: "○" if ok else "×",
            },
        },
    },
}

SWEEP_SHEET_DEF = {
    "SHEET_TITLE": "誤り頻度ごとの評価",
    "TABLE_HEADER": {
        "row": {"pos": 2, "height": 18},
        "freeze_col": 4,
        "col": {
            "p_e": {"label": "P_e", "pos": 2, "width": 8, "format": "0.00"},
            "level": {"label": "レベル", "pos": 3, "width": 12, "format": "@"},
            "task": {"label": "タスク", "pos": 4, "width": 12, "format": "@"},
            "accuracy": {"label": "Accuracy", "pos": 5, "width": 11, "format": "0.0000"},
            "precision": {"label": "Precision", "pos": 6, "width": 11, "format": "0.0000"},
            "recall": {"label": "Recall", "pos": 7, "width": 11, "format": "0.0000"},
            "f1": {"label": "F1", "pos": 8, "width": 11, "format": "0.0000"},
            "tp": {"label": "TP", "pos": 9, "width": 9, "format": "0"},
            "fp": {"label": "FP", "pos": 10, "width": 9, "format": "0"},
            "fn": {"label": "FN", "pos": 11, "width": 9, "format": "0"},
        },
    },
}


def metric_rows(report):
    row_list = []
    for level in csc_bench.metrics.LEVEL_LIST:
        for task in csc_bench.metrics.TASK_LIST:
            score = report.score(level, task)
            row_list.append(
                {
                    "level": level,
                    "task": task,
                    "accuracy": score.accuracy,
                    "precision": score.precision,
                    "recall": score.recall,
                    "f1": score.f1,
                    "tp": score.counts.tp,
                    "fp": score.counts.fp,
                    "fn": score.counts.fn,
                    "total": score.counts.total,
                }
            )
    return row_list


def format_value(value):
    if isinstance(value, float):
        return "{value:.4f}".format(value=value)
    return str(value)


def render_tsv(row_list, column_list):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=column_list, delimiter="\t", lineterminator="\n")
    writer.writeheader()
    for row in row_list:
        writer.writerow({key: format_value(row[key]) for key in column_list})
    return buf.getvalue()


def render_csv(row_list, column_list):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=column_list, lineterminator="\n")
    writer.writeheader()
    for row in row_list:
        writer.writerow({key: row[key] for key in column_list})
    return buf.getvalue()


def render_table(row_list, column_list):
    cell_list = [list(column_list)] + [[format_value(row[key]) for key in column_list] for row in row_list]
    width = [max(len(cell[i]) for cell in cell_list) for i in range(len(column_list))]

    line_list = []
    for n, cell in enumerate(cell_list):
        line_list.append("  ".join(value.rjust(width[i]) for i, value in enumerate(cell)).rstrip())
        if n == 0:
            line_list.append("  ".join("-" * w for w in width))

    return "\n".join(line_list) + "\n"


def render_eval(report, output_format, keep_correct=None):
    if output_format == "json":
        data = {"metrics": report.as_dict()}
        if keep_correct is not None:
            data["keep_correct_accuracy"] = keep_correct
        return local_lib.serializer.dump_json(data)

    row_list = metric_rows(report)
    if output_format == "tsv":
        text = render_tsv(row_list, METRIC_COLUMN)
    else:
        text = render_table(row_list, METRIC_COLUMN)

    if keep_correct is not None:
        text += "keep_correct_accuracy\t{value}\n".format(value=format_value(keep_correct))

    return text


def render_record(record, output_format):
    """DatasetStats や CoverageReport のような 1 行のレコードを書き出します．"""
    data = dataclasses.asdict(record) if dataclasses.is_dataclass(record) else dict(record)

    if output_format == "json":
        return local_lib.serializer.dump_json(data)

    column_list = list(data.keys())
    if output_format == "tsv":
        return render_tsv([data], column_list)

    width = max(len(key) for key in column_list)
    return "".join(
        "{key}  {value}\n".format(key=key.ljust(width), value=format_value(data[key])) for key in column_list
    )


def render_records(row_list, output_format):
    if output_format == "json":
        return local_lib.serializer.dump_json(row_list)

    column_list = list(row_list[0].keys())
    if output_format == "tsv":
        return render_tsv(row_list, column_list)
    return render_table(row_list, column_list)


def render_sweep_csv(sweep_result):
    return render_csv(csc_bench.analysis.sweep_rows(sweep_result), csc_bench.analysis.SWEEP_COLUMN)


def store_detail_xlsx(file_path, instance_list):
    local_lib.openpyxl_util.generate_book(
        file_path, [(csc_bench.metrics.detail_rows(instance_list), DETAIL_SHEET_DEF)]
    )


def store_sweep_xlsx(file_path, sweep_result):
    local_lib.openpyxl_util.generate_book(file_path, [(csc_bench.analysis.sweep_rows(sweep_result), SWEEP_SHEET_DEF)])
